def safe_div(a, b):
    if b == 0:
        return None
    return a / b


def main():
    for a, b in [(1, 2), (3, 0)]:
        log(safe_div(a, b))


if __name__ == "__main__":
    main()
# end
