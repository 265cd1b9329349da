"""Writes pkdd_sample.asc: a small file in the PKDD'99 trans.asc layout.

Accounts 101 and 102 span more than four years, 103 spans about 3.9 years and 104 one year.
"""
import datetime as dt
import random


def main():
    rng = random.Random(99)
    spans = {101: (dt.date(1993, 1, 5), dt.date(1998, 12, 20)),
             102: (dt.date(1994, 2, 1), dt.date(1998, 12, 28)),
             103: (dt.date(1995, 1, 10), dt.date(1998, 11, 30)),
             104: (dt.date(1997, 12, 1), dt.date(1998, 12, 1))}
    rows = []
    tid = 1000
    for acct, (start, end) in spans.items():
        balance = 0.0
        day = start
        while day <= end:
            if day == start or day.day == 10:
                kind, op, amount = "PRIJEM", "VKLAD", round(rng.uniform(12000, 18000), 1)
            else:
                kind = rng.choice(["VYDAJ", "VYBER"])
                op = "PREVOD NA UCET" if kind == "VYDAJ" else "VYBER"
                amount = round(rng.uniform(200, 3000), 1)
            balance += amount if kind == "PRIJEM" else -amount
            rows.append((tid, acct, day.strftime("%y%m%d"), kind, op, amount, round(balance, 1)))
            tid += 1
            day = day + dt.timedelta(days=10 - day.day % 10 if day.day % 10 else rng.randint(2, 6))
            if day.day > 28:
                day = (day.replace(day=1) + dt.timedelta(days=32)).replace(day=1)
    rows.sort(key=lambda r: (r[2], r[0]))
    with open("pkdd_sample.asc", "w", newline="\n") as f:
        f.write('"trans_id";"account_id";"date";"type";"operation";"amount";"balance";"k_symbol";"bank";"account"\n')
        for r in rows:
            f.write(f'{r[0]};{r[1]};{r[2]};"{r[3]}";"{r[4]}";{r[5]:.1f};{r[6]:.1f};"";"";\n')


if __name__ == "__main__":
    main()
