def is_leap(year):
    if year % 4 == 0:
        return True
    return False

for y in (1900, 2000, 2023, 2024):
    print(y, is_leap(y))
