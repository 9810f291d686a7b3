sentence = "generated code needs review"
words = sentence.split(" ")
print(" ".join(reversed(words)))
print(sentence[::-1]
