def factorial(n):
    """Return n! for n >= 0."""
    if n < 2:
        return 1
    return n * factorial(n - 1)


if __name__ == "__main__":
    for k in range(6):
        print(k, factorial(k))
