def largest(values):
    """Largest element of a non-empty list."""
    return max(values)


print(largest([3, 41, 12, 9, 74, 15]))
