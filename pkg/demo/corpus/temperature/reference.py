def celsius_to_fahrenheit(celsius):
    """Convert a temperature from Celsius to Fahrenheit."""
    return celsius * 9 / 5 + 32


def fahrenheit_to_celsius(fahrenheit):
    """Convert a temperature from Fahrenheit to Celsius."""
    return (fahrenheit - 32) * 5 / 9


for c in (-40, 0, 37, 100):
    print(c, round(celsius_to_fahrenheit(c), 1))
print(fahrenheit_to_celsius(212))
