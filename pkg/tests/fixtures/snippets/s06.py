x = 1  # inline comment
y = 2
# full line comment

# another
z = x + y
