def outer(n):
        while m > 0:
            m -= 1
        return m
    return inner(n) + 1
# end
