"""Regenerates the bundled offline fixture: a 135-row Goodreads export and the
matching provider metadata. Output is deterministic."""

import csv
import io
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
rng = random.Random(20240517)

GENRES = {
    "Fantasy": (["Fantasy", "Magic", "Dragons"], ["Ember", "Crown", "Dragon", "Spell", "Thorn", "Wyrm", "Rune"]),
    "SciFi": (["Science Fiction", "Space Opera", "Robots"], ["Star", "Orbit", "Signal", "Nebula", "Circuit", "Vector"]),
    "Dystopian": (["Dystopias", "Post-apocalyptic fiction"], ["Ashes", "Wall", "District", "Ration", "Silence"]),
    "Mystery": (["Mystery", "Detective and mystery stories"], ["Clue", "Locket", "Cipher", "Alibi", "Footprint"]),
    "Horror": (["Horror", "Haunted houses"], ["Hollow", "Crypt", "Shadow", "Lantern", "Bone"]),
    "Historical": (["Historical fiction"], ["Harbor", "Empire", "Frontier", "Mill", "Voyage"]),
    "Classics": (["Classics", "Literary collections"], ["Garden", "Island", "Manor", "River", "Orchard"]),
}
COUNTS = {"Fantasy": 30, "SciFi": 22, "Dystopian": 18, "Mystery": 20, "Horror": 12, "Historical": 15, "Classics": 18}
AGES = [("Juvenile fiction", 0.12), ("Middle grade", 0.35), ("Young adult fiction", 0.38), (None, 0.15)]
FIRST = ["Ada", "Bram", "Cora", "Dev", "Elin", "Farah", "Gus", "Hana", "Ivo", "June", "Kai", "Lena", "Milo", "Nora", "Otto", "Pia"]
LAST = ["Ashford", "Brook", "Castell", "Dunmore", "Ellery", "Fenwick", "Garrow", "Hale", "Ingram", "Jessop", "Kerr", "Lowell"]
WORDS = ["of", "the", "and", "beyond", "under", "last", "first", "secret"]
BINDINGS = [("Hardcover", 0.35), ("Paperback", 0.45), ("Mass Market Paperback", 0.1), ("Kindle Edition", 0.1)]
PUBLISHERS = ["Harbor House", "Lantern Press", "Northwind Books", "Quill & Key", "Saltmarsh"]
PALETTE = ["#1f3a5f", "#8c1c13", "#2e6b3a", "#d9a404", "#5b2a86", "#e8e2d0", "#202020", "#c0504d", "#4bacc6", "#f2f2f2", "#7f6000", "#e36c09"]


def pick(weighted):
    x = rng.random()
    for value, w in weighted:
        x -= w
        if x <= 0:
            return value
    return weighted[-1][0]


def isbn13(prefix12):
    total = sum(int(d) * (1 if i % 2 == 0 else 3) for i, d in enumerate(prefix12))
    return prefix12 + str((10 - total % 10) % 10)


def isbn10_of(i13):
    core = i13[3:12]
    total = sum(int(d) * (10 - i) for i, d in enumerate(core))
    check = (11 - total % 11) % 11
    return core + ("X" if check == 10 else str(check))


def main():
    rows, meta = [], {}
    used = set()
    book_id = 1000
    genre_list = [g for g, n in COUNTS.items() for _ in range(n)]
    rng.shuffle(genre_list)
    assert len(genre_list) == 135
    series_counter = {}
    for n, genre in enumerate(genre_list):
        subjects, nouns = GENRES[genre]
        if n == 0:
            code = "9780000000002"
        else:
            while True:
                code = isbn13("978" + "".join(str(rng.randrange(10)) for _ in range(9)))
                if code not in used:
                    break
        used.add(code)
        book_id += 1
        first, last = rng.choice(FIRST), rng.choice(LAST)
        title = f"The {rng.choice(nouns)} {rng.choice(WORDS)} {rng.choice(nouns)}".replace(" the ", " ").title()
        series = None
        if rng.random() < 0.25:
            key = f"{genre} {last}"
            series_counter[key] = series_counter.get(key, 0) + 1
            series = (f"The {nouns[0]} Cycle", series_counter[key])
            display_title = f"{title} ({series[0]}, #{series[1]})"
        else:
            display_title = title
        binding = pick(BINDINGS)
        pages = rng.randint(140, 620)
        avg = round(rng.uniform(3.1, 4.6), 2)
        mine = rng.choice([0, 0, 3, 4, 5])
        year = rng.randint(1950, 2023)
        age = pick(AGES)
        only_isbn10 = n % 17 == 5
        rows.append({
            "Book Id": book_id,
            "Title": display_title,
            "Author": f"{first} {last}",
            "Author l-f": f"{last}, {first}",
            "Additional Authors": "",
            "ISBN": f'="{isbn10_of(code)}"',
            "ISBN13": '=""' if only_isbn10 else f'="{code}"',
            "My Rating": mine,
            "Average Rating": f"{avg:.2f}",
            "Publisher": rng.choice(PUBLISHERS),
            "Binding": binding,
            "Number of Pages": pages,
            "Year Published": year,
            "Original Publication Year": year,
            "Date Read": "",
            "Date Added": f"2023/{1 + n % 12:02d}/{1 + n % 28:02d}",
            "Bookshelves": "",
            "Exclusive Shelf": rng.choice(["read", "to-read", "currently-reading"]),
            "My Review": "",
            "Read Count": 1 if mine else 0,
        })
        record = {
            "title": title,
            "authors": [f"{first} {last}"],
            "pages": pages,
            "binding": binding,
            "subjects": subjects[: rng.randint(1, len(subjects))] + ([age] if age else []),
            "rating": avg,
        }
        r = rng.random()
        if r < 0.45:
            h_in = {"Hardcover": 9.25, "Paperback": 8.0, "Mass Market Paperback": 6.87}.get(binding, 8.25)
            record["dimensions"] = f"Height: {h_in + rng.choice([0, 0.1, -0.1]):.2f} Inches, Length: 6.1 Inches, Weight: 1.1 Pounds, Width: {0.2 + pages * 0.0025:.2f} Inches"
        elif r < 0.6:
            record["dimensions_structured"] = {
                "height": {"value": round(rng.uniform(19.0, 24.0), 1), "unit": "cm"},
                "width": {"value": round(5 + pages * 0.065, 1), "unit": "mm"},
            }
        if n % 9 != 4:
            bg, accent = rng.sample(PALETTE, 2)
            record["image"] = f"synthetic:{bg}:{accent}:{rng.randint(5, 35)}"
        meta[code] = record

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    (HERE / "goodreads_library.csv").write_text(buf.getvalue())
    (HERE / "metadata.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
