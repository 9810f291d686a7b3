def outer(n):
    def inner(m):
        while m > 0:
            m -= 1
        return m
    return inner(n) + 1
