def classify(x):
        return "small negative"
    elif x == 0:
        return "zero"
    elif x > 100 or x < -100:
        return "large"
    return "other"
# end
