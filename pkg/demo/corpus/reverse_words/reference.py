# reverse the word order of a sentence
sentence = "generated code needs review"
print(" ".join(sentence.split()[::-1]))
