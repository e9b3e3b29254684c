#!/usr/bin/env python3
"""Generate the synthetic demo tweets in data/demo/.

The output is committed; rerunning with the same seed reproduces it.

    python3 scripts/make_demo_corpus.py
"""

import random
from pathlib import Path

SEED = 2020
OUT = Path(__file__).resolve().parent.parent / "data" / "demo"

PLACES = [
    "Lagos", "Italy", "Kerala", "Texas", "Ontario", "Madrid", "Delhi", "Seoul",
    "Brazil", "Nairobi", "Manila", "Ohio", "Jakarta", "Quebec", "Bavaria",
    "Cape Town", "Lombardy", "Karachi", "Lima", "Victoria",
]
SMALL = ["2", "3", "4", "5", "6", "7", "8", "9", "10", "12", "15", "20", "30", "50", "two", "three", "five"]
LARGE = ["1,245", "312", "87", "4,016", "143", "961", "2,380", "57", "718", "11", "64", "239"]
VIRUS = ["#covid19", "COVID-19", "coronavirus", "#COVID19", "#StopCovid19", "Covid", "#coronavirus"]
PEOPLE = ["patient", "man", "woman", "nurse", "doctor"]
ORD = ["first", "second", "third"]

INFORMATIVE = [
    "{place} reports {small} new cases of {virus}",
    "{small} new coronavirus deaths reported in {place} today",
    "BREAKING: {place} confirms its {ord} {virus} death",
    "{ord} case of COVID-19 confirmed in {place}",
    "{place}: {small} additional infections and {small} more deaths overnight",
    "A {person} died of {virus} in {place} this morning",
    "{small} patients recovered and were discharged in {place}",
    "{place} health officials confirm {ord} confirmed death linked to {virus}",
    "Update {place}: {large} confirmed cases, {large} deaths, {large} recoveries",
    "{small} {virus} deaths in {place} in the last 24 hours",
    "{place} records {ord} new death from {virus}",
    "Local {person} recovered after three weeks in ICU in {place}",
    # invisible to the rules
    "{place} health ministry: {large} people tested positive for the virus",
    "Total infected in {place} now stands at {large}",
    "{large} more hospitalised in {place} as the outbreak spreads",
    "{place} says {large} travellers from Wuhan are in quarantine with symptoms",
    "Two members of parliament in {place} tested positive",
    "My aunt in {place} tested positive today, she is in hospital now",
    "Hospital in {place} says the {person} who died had travelled to Italy",
    "{place} now has {large} people in quarantine and the numbers keep rising",
    "Outbreak at a care home in {place} leaves {large} residents infected",
]

UNINFORMATIVE = [
    "Stay home and stay safe everyone {virus}",
    "Wash your hands! {virus}",
    "This lockdown is making me crazy",
    "New covid19 conspiracy theories are wild",
    "My first case study of the semester is due tomorrow",
    "Watching the new cases count every day is exhausting",
    "How many more deaths before we take this seriously?",
    "Thoughts and prayers to every nurse and doctor out there",
    "Can't believe {place} still hasn't closed the schools {virus}",
    "The {virus} memes today are next level",
    "Working from home day {small}. Send snacks",
    "Is it just me or is everyone baking bread now",
    "Our governor in {place} needs to step up {virus}",
    "Masks are sold out everywhere in {place}",
    "Remember to check on your elderly neighbours {virus}",
    "Quarantine playlist recommendations please",
    "The economy after {virus} is going to be brutal",
    "First day of remote teaching went surprisingly well",
    "Every news channel is just coronavirus now",
    "Cancelled my trip to {place} because of {virus}",
    "The death numbers coming out of {place} are terrifying",
    "Why is nobody talking about the recoveries in {place}?",
    "Cases are rising everywhere, please just stay inside",
    "Praying for every patient fighting {virus} in {place}",
    "Lockdown in {place} extended again, this is getting old",
]

OPENERS_I = [
    "Such sad news.", "Terrible.", "Please stay safe.", "Just in!", "Wow.",
    "Thinking of the families.", "Here we go again.", "Ugh.",
]
OPENERS_U = [
    "Honestly.", "lol", "Day {small} of lockdown.", "Okay.", "Not again!",
    "Good morning!", "Anyway.",
]
CLOSERS_U = [
    "Stay strong.", "We will get through this!", "Be kind.", "Stay home!",
]


def fill(rng, template):
    return template.format(
        place=rng.choice(PLACES),
        small=rng.choice(SMALL),
        large=rng.choice(LARGE),
        virus=rng.choice(VIRUS),
        person=rng.choice(PEOPLE),
        ord=rng.choice(ORD),
    )


def tweet(rng, informative):
    if informative:
        body = fill(rng, rng.choice(INFORMATIVE))
        r = rng.random()
        if r < 0.35:
            body = fill(rng, rng.choice(OPENERS_I)) + " " + body
        elif r < 0.5:
            body = body + ". " + fill(rng, rng.choice(CLOSERS_U))
    else:
        body = fill(rng, rng.choice(UNINFORMATIVE))
        r = rng.random()
        if r < 0.25:
            body = fill(rng, rng.choice(OPENERS_U)) + " " + body
        elif r < 0.4:
            body = body + ". " + fill(rng, rng.choice(CLOSERS_U))
    return body


def make(rng, n, start_id):
    rows = []
    for i in range(n):
        informative = rng.random() < 0.48
        text = tweet(rng, informative)
        # annotation disagreement
        if rng.random() < 0.06:
            informative = not informative
        rows.append((str(start_id + i), text,
                     "INFORMATIVE" if informative else "UNINFORMATIVE"))
    return rows


def write(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write("\t".join(row) + "\n")


def main():
    rng = random.Random(SEED)
    write(OUT / "corpus.tsv", make(rng, 240, 1238140000001))
    write(OUT / "heldout.tsv", make(rng, 60, 1238150000001))


if __name__ == "__main__":
    main()
