a = b + c
# end
