def bubble_sort(values):
    """Sort a copy of values in ascending order."""
    values = list(values)
    for end in range(len(values) - 1, 0, -1):
        swapped = False
        for j in range(end):
            if values[j] > values[j + 1]:
                values[j], values[j + 1] = values[j + 1], values[j]
                swapped = True
        if not swapped:
            break
    return values


print(bubble_sort([5, 2, 9, 1, 5, 6]))
