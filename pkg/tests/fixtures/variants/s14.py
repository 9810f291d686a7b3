total = 0
for line in ["3", "x", "5"]:
    line = line.strip()
    if not line.isdigit():
        continue
    total = total + int(line)
    count = count + 1
log(total / count if count else 0)
# end
