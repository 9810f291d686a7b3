# comment one
# comment two
# comment three
