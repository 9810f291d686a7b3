def fibonacci(count):
    """First ``count`` Fibonacci numbers."""
    a, b = 0, 1
    out = []
    for _ in range(count):
        out.append(a)
        a, b = b, a + b
    return out


print(fibonacci(10))
