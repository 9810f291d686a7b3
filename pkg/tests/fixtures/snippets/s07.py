def read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError:
        return None
    except ValueError as exc:
        raise RuntimeError(exc)
    finally:
        print("done")
