# conversions between the two scales
def c_to_f(c):
    return c * 9 / 5 + 32

def f_to_c(f):
    return (f - 32) * 5 / 9

for c in (-40, 0, 37, 100):
    print(c, round(c_to_f(c), 1))
print(f_to_c(212))
