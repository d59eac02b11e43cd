total = 0
for i in [3, 5, 8, 13]:
    if i % 2 == 0:
        continue
    total += i
while total > 10:
    total -= 7
    if total == 3:
        break
print(total)
