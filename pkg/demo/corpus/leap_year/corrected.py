def is_leap(year):
    # divisible by 4, except centuries not divisible by 400
    if year % 4 == 0 and (year % 100 != 0 or year % 400 == 0):
        return True
    return False

for y in (1900, 2000, 2023, 2024):
    print(y, is_leap(y))
