"""Regenerate the bundled fixture files.

The queries are hand-normalized; this script verifies each one re-parses,
round-trips byte-for-byte, and is a fixed point of the normalizer before
writing anything. Run from the repository root:

    python tests/fixtures/generate.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from viscorpus.dataset import (
    TableTextRecord,
    Text2VisRecord,
    VisQARecord,
    schema_from_dict,
    write_dataset,
)
from viscorpus.jsonl import dump_jsonl
from viscorpus.table import DataTable
from viscorpus.vql import normalize_vql, parse_vql, serialize_vql

HERE = Path(__file__).parent

SCHEMAS = [
    {
        "db_id": "inn_1",
        "tables": [
            {"name": "rooms", "columns": ["roomid", "roomname", "bedtype", "baseprice", "decor"]},
        ],
    },
    {
        "db_id": "theme_gallery",
        "tables": [
            {"name": "artist", "columns": ["age", "name", "country", "year_join", "artist_id"]},
            {"name": "exhibition_record", "columns": ["exhibition_id", "date", "attendance"]},
        ],
    },
    {
        "db_id": "allergy_1",
        "tables": [
            {"name": "allergy_type", "columns": ["allergy", "allergytype"]},
            {"name": "has_allergy", "columns": ["stuid", "allergy"]},
            {
                "name": "student",
                "columns": ["stuid", "lname", "fname", "age", "sex", "major", "advisor", "city_code"],
            },
        ],
    },
    {
        "db_id": "film_rank",
        "tables": [
            {"name": "film", "columns": ["film_id", "title", "studio", "director", "gross_in_dollar"]},
            {
                "name": "film_market_estimation",
                "columns": [
                    "estimation_id",
                    "low_estimate",
                    "high_estimate",
                    "film_id",
                    "type",
                    "market_id",
                    "year",
                ],
            },
            {"name": "market", "columns": ["market_id", "country", "number_cities"]},
        ],
    },
    {
        "db_id": "soccer_1",
        "tables": [
            {"name": "player", "columns": ["player_id", "name", "team_id", "years_played"]},
            {"name": "team", "columns": ["team_id", "name"]},
        ],
    },
    {
        "db_id": "orchestra_1",
        "tables": [
            {"name": "conductor", "columns": ["conductor_id", "name", "age", "nationality", "year_of_work"]},
            {
                "name": "orchestra",
                "columns": [
                    "orchestra_id",
                    "orchestra",
                    "conductor_id",
                    "record_company",
                    "year_of_founded",
                    "major_record_format",
                ],
            },
            {
                "name": "performance",
                "columns": [
                    "performance_id",
                    "orchestra_id",
                    "type",
                    "date",
                    "official_ratings_millions",
                    "weekly_rank",
                    "share",
                ],
            },
        ],
    },
    {
        "db_id": "city_records",
        "tables": [
            {"name": "city", "columns": ["city_id", "name", "population", "area_km2", "mayor"]},
            {"name": "temperature", "columns": ["city_id", "month", "avg_temp"]},
        ],
    },
    {
        "db_id": "shop_sales",
        "tables": [
            {"name": "shop", "columns": ["shop_id", "shop_name", "location", "open_year"]},
            {
                "name": "device",
                "columns": ["device_id", "device", "carrier", "package_version", "applications", "software_platform"],
            },
            {"name": "stock", "columns": ["shop_id", "device_id", "quantity"]},
        ],
    },
]

# (db_id, question, normalized query)
TEXT2VIS = [
    ("inn_1", "Just show the average and minimum price of the rooms in different decor using a scatter.",
     "visualize scatter select avg(rooms.baseprice), min(rooms.baseprice) from rooms group by rooms.decor"),
    ("inn_1", "How many rooms are there for each bed type? Draw a bar chart.",
     "visualize bar select rooms.bedtype, count(rooms.bedtype) from rooms group by rooms.bedtype"),
    ("inn_1", "Show the share of rooms per decor as a pie, most common decor first.",
     "visualize pie select rooms.decor, count(rooms.decor) from rooms group by rooms.decor order by count(rooms.decor) desc"),
    ("inn_1", "List room names and prices above 150 in a bar chart, cheapest first.",
     "visualize bar select rooms.roomname, rooms.baseprice from rooms where rooms.baseprice > 150 order by rooms.baseprice asc"),
    ("inn_1", "Plot base price by room id for queen beds as a line.",
     "visualize line select rooms.roomid, rooms.baseprice from rooms where rooms.bedtype = 'queen' order by rooms.roomid asc"),
    ("theme_gallery", "Give me a pie chart about the proportion of the number of countries in the artist table.",
     "visualize pie select artist.country, count(artist.country) from artist group by artist.country"),
    ("theme_gallery", "Bar chart of artists younger than forty by age, oldest first.",
     "visualize bar select artist.name, artist.age from artist where artist.age < 40 order by artist.age desc"),
    ("theme_gallery", "Scatter the year each artist joined against their age.",
     "visualize scatter select artist.year_join, artist.age from artist"),
    ("theme_gallery", "Line of total attendance per date from the exhibition record table.",
     "visualize line select exhibition_record.date, sum(exhibition_record.attendance) from exhibition_record group by exhibition_record.date"),
    ("theme_gallery", "Count artists per country for those joining after 2000, ascending bars.",
     "visualize bar select artist.country, count(artist.country) from artist where artist.year_join >= 2000 group by artist.country order by count(artist.country) asc"),
    ("allergy_1", "List the last name of the students who do not have any food type allergy and count them in a bar chart, show Y-axis from low to high order.",
     "visualize bar select student.lname, count(student.lname) from student where student.stuid not in (select has_allergy.stuid from has_allergy join allergy_type on has_allergy.allergy = allergy_type.allergy where allergy_type.allergytype = 'food') group by student.lname order by count(student.lname) asc"),
    ("allergy_1", "Pie of students by sex.",
     "visualize pie select student.sex, count(student.sex) from student group by student.sex"),
    ("allergy_1", "Average student age per major, tallest bars first.",
     "visualize bar select student.major, avg(student.age) from student group by student.major order by avg(student.age) desc"),
    ("allergy_1", "Stacked bar of student counts by sex within each major.",
     "visualize stacked bar select student.sex, count(student.sex) from student group by student.sex, student.major"),
    ("allergy_1", "How many students have each allergy type? Bar chart please.",
     "visualize bar select allergy_type.allergytype, count(allergy_type.allergytype) from allergy_type join has_allergy on allergy_type.allergy = has_allergy.allergy group by allergy_type.allergytype"),
    ("allergy_1", "Pie of city codes for students aged eighteen to twenty five.",
     "visualize pie select student.city_code, count(student.city_code) from student where student.age between 18 and 25 group by student.city_code"),
    ("allergy_1", "Bar of first names and ages for women over twenty, youngest first.",
     "visualize bar select student.fname, student.age from student where student.sex = 'f' and student.age > 20 order by student.age asc"),
    ("allergy_1", "Names and ages for major 600 or city code bal, alphabetically.",
     "visualize bar select student.lname, student.age from student where student.major = 600 or student.city_code = 'bal' order by student.lname asc"),
    ("film_rank", "A bar chart for the number of film market estimations of each type, sorted by type.",
     "visualize bar select film_market_estimation.type, count(film_market_estimation.type) from film join film_market_estimation on film.film_id = film_market_estimation.film_id group by film_market_estimation.type order by film_market_estimation.type asc"),
    ("film_rank", "Scatter gross dollars against low estimates for films with estimations.",
     "visualize scatter select film.gross_in_dollar, film_market_estimation.low_estimate from film join film_market_estimation on film.film_id = film_market_estimation.film_id"),
    ("film_rank", "Pie of markets per country.",
     "visualize pie select market.country, count(market.country) from market group by market.country"),
    ("film_rank", "Top grossing studio bars over one million.",
     "visualize bar select film.studio, max(film.gross_in_dollar) from film where film.gross_in_dollar > 1000000 group by film.studio order by max(film.gross_in_dollar) desc"),
    ("film_rank", "Grouping scatter of estimation year against high estimate for the japan market.",
     "visualize grouping scatter select film_market_estimation.year, film_market_estimation.high_estimate from film_market_estimation join market on film_market_estimation.market_id = market.market_id where market.country = 'japan'"),
    ("film_rank", "Total cities per market country containing the letter a.",
     "visualize bar select market.country, sum(market.number_cities) from market where market.country like '%a%' group by market.country"),
    ("soccer_1", "How many players spent each number of years on the columbus crew? Ascending bars.",
     "visualize bar select team.name, count(player.years_played) from player join team on player.team_id = team.team_id where team.name = 'columbus crew' group by player.years_played order by count(player.years_played) asc"),
    ("soccer_1", "Bar of player names by years played, most experienced first.",
     "visualize bar select player.name, player.years_played from player order by player.years_played desc"),
    ("soccer_1", "Pie of players per team.",
     "visualize pie select team.name, count(player.player_id) from player join team on player.team_id = team.team_id group by team.name"),
    ("soccer_1", "Scatter of player counts per years played.",
     "visualize scatter select player.years_played, count(player.player_id) from player group by player.years_played"),
    ("orchestra_1", "Count orchestras per major record format, fewest first.",
     "visualize bar select orchestra.major_record_format, count(orchestra.major_record_format) from orchestra group by orchestra.major_record_format order by count(orchestra.major_record_format) asc"),
    ("orchestra_1", "Pie of conductors per nationality.",
     "visualize pie select conductor.nationality, count(conductor.nationality) from conductor group by conductor.nationality"),
    ("orchestra_1", "Scatter conductor age against years of work.",
     "visualize scatter select conductor.age, conductor.year_of_work from conductor"),
    ("orchestra_1", "Line of orchestras founded per year, chronological.",
     "visualize line select orchestra.year_of_founded, count(orchestra.year_of_founded) from orchestra group by orchestra.year_of_founded order by orchestra.year_of_founded asc"),
    ("orchestra_1", "Bar of conductors leading orchestras founded after 2003, longest serving first.",
     "visualize bar select conductor.name, conductor.year_of_work from conductor where conductor.conductor_id in (select orchestra.conductor_id from orchestra where orchestra.year_of_founded > 2003) order by conductor.year_of_work desc"),
    ("orchestra_1", "Grouping line of official ratings by date for decca orchestras.",
     "visualize grouping line select performance.date, performance.official_ratings_millions from performance join orchestra on performance.orchestra_id = orchestra.orchestra_id where orchestra.record_company = 'decca'"),
    ("orchestra_1", "Stacked bar of orchestras by record company within record format.",
     "visualize stacked bar select orchestra.record_company, count(orchestra.record_company) from orchestra group by orchestra.record_company, orchestra.major_record_format"),
    ("city_records", "Bar the names and populations of cities over half a million, biggest first.",
     "visualize bar select city.name, city.population from city where city.population > 500000 order by city.population desc"),
    ("city_records", "Line of average temperature by month.",
     "visualize line select temperature.month, avg(temperature.avg_temp) from temperature group by temperature.month order by temperature.month asc"),
    ("city_records", "Scatter population against area.",
     "visualize scatter select city.population, city.area_km2 from city"),
    ("city_records", "Grouping line of monthly temperature for london and paris.",
     "visualize grouping line select temperature.month, temperature.avg_temp from temperature join city on temperature.city_id = city.city_id where city.name in ('london', 'paris')"),
    ("city_records", "Pie of cities per mayor.",
     "visualize pie select city.mayor, count(city.mayor) from city group by city.mayor"),
    ("city_records", "July temperature per city, hottest first.",
     "visualize bar select city.name, temperature.avg_temp from city join temperature on city.city_id = temperature.city_id where temperature.month = 7 order by temperature.avg_temp desc"),
    ("shop_sales", "Count devices per software platform, descending.",
     "visualize bar select device.software_platform, count(device.software_platform) from device group by device.software_platform order by count(device.software_platform) desc"),
    ("shop_sales", "Pie of devices per carrier.",
     "visualize pie select device.carrier, count(device.carrier) from device group by device.carrier"),
    ("shop_sales", "Count shops per location opened since 2010.",
     "visualize bar select shop.location, count(shop.location) from shop where shop.open_year >= 2010 group by shop.location"),
    ("shop_sales", "Stacked bar of stock per shop location within software platform.",
     "visualize stacked bar select shop.location, sum(stock.quantity) from shop join stock on shop.shop_id = stock.shop_id join device on stock.device_id = device.device_id group by shop.location, device.software_platform"),
    ("shop_sales", "Scatter of shop counts per opening year.",
     "visualize scatter select shop.open_year, count(shop.shop_id) from shop group by shop.open_year"),
    ("shop_sales", "Grouping scatter of stock quantity by package version excluding sprint.",
     "visualize grouping scatter select device.package_version, stock.quantity from stock join device on stock.device_id = device.device_id where device.carrier != 'sprint'"),
    ("shop_sales", "Total stock per shop, fullest first.",
     "visualize bar select shop.shop_name, sum(stock.quantity) from shop join stock on shop.shop_id = stock.shop_id group by shop.shop_name order by sum(stock.quantity) desc"),
    ("orchestra_1", "Performance counts bucketed by weekday.",
     "visualize bar select performance.date, count(performance.date) from performance bin performance.date by weekday"),
    ("orchestra_1", "Monthly share totals for non-live performances.",
     "visualize line select performance.date, sum(performance.share) from performance where performance.type != 'live' bin performance.date by month"),
]

FILM_TYPE_TABLE = {
    "headers": ["film.type", "count(film.type)"],
    "rows": [
        ["Mass human sacrifice", "1"],
        ["Mass suicide", "6"],
        ["Mass suicide murder", "2"],
    ],
}

FILM_VQL = (
    "visualize bar select film_market_estimation.type, count(film_market_estimation.type) "
    "from film join film_market_estimation on film.film_id = film_market_estimation.film_id "
    "group by film_market_estimation.type order by film_market_estimation.type asc"
)

# (db_id, question, answer, vql, qtype, table or None)
VISQA = [
    ("film_rank", "What is the meaning of this DV?",
     "It counts film market estimations of each type and sorts the bars by type.",
     FILM_VQL, 1, FILM_TYPE_TABLE),
    ("theme_gallery", "What is the meaning of this DV?",
     "It shows the share of artists coming from each country.",
     "visualize pie select artist.country, count(artist.country) from artist group by artist.country", 1, None),
    ("inn_1", "What does this visualization show?",
     "It compares the average and minimum base price of rooms for each decor.",
     "visualize scatter select avg(rooms.baseprice), min(rooms.baseprice) from rooms group by rooms.decor", 1, None),
    ("film_rank", "Is this DV suitable for the given dataset?",
     "Yes. The grouped counts fit a bar chart.",
     FILM_VQL, 2, FILM_TYPE_TABLE),
    ("inn_1", "Is this DV suitable for the given dataset?",
     "Yes. Both axes are numeric aggregates.",
     "visualize scatter select avg(rooms.baseprice), min(rooms.baseprice) from rooms group by rooms.decor", 2, None),
    ("allergy_1", "Is this DV suitable for the given dataset?",
     "No. A pie chart needs a categorical breakdown.",
     "visualize pie select student.age, count(student.age) from student group by student.age", 2, None),
    ("soccer_1", "Is a line chart suitable here?",
     "No. Years played is discrete, so bars fit better.",
     "visualize bar select player.name, player.years_played from player order by player.years_played desc", 2, None),
    ("film_rank", "Is any equal value of y-axis in the chart?", "No", FILM_VQL, 3, FILM_TYPE_TABLE),
    ("film_rank", "How many parts are there in the chart?", "3", FILM_VQL, 3, FILM_TYPE_TABLE),
    ("film_rank", "What is the value of the smallest part in the chart?", "1", FILM_VQL, 3, FILM_TYPE_TABLE),
    ("film_rank", "What is the total number of count(film.type)?", "9", FILM_VQL, 3, FILM_TYPE_TABLE),
    ("city_records", "What is the biggest value on the x-axis?", "12",
     "visualize line select temperature.month, avg(temperature.avg_temp) from temperature group by temperature.month order by temperature.month asc", 3, None),
]

# (source, headers, rows, description)
TABLETEXT = [
    ("wikitabletext",
     ["subjtitle", "subjsubtitle", "year", "english title", "publisher", "notes"],
     [["so ji-sub", "books", "2010", "so ji-sub's journey", "sallim", "photo-essays"]],
     "Sallim was the publisher of so ji-sub's journey in 2010."),
    ("wikitabletext",
     ["rank", "nation", "gold", "silver", "bronze"],
     [["1", "norway", "14", "14", "11"], ["2", "germany", "14", "10", "7"], ["3", "canada", "11", "8", "10"]],
     "Norway topped the medal table with fourteen golds."),
    ("wikitabletext",
     ["season", "club", "appearances", "goals"],
     [["2004", "rosario", "30", "9"], ["2005", "rosario", "28", "13"]],
     "He scored thirteen goals in twenty eight appearances during 2005."),
    ("chart2text",
     ["year", "share of households"],
     [["2015", "68%"], ["2016", "72%"], ["2017", "75%"], ["2018", "79%"]],
     "The share of households grew every year, reaching 79 percent in 2018."),
    ("chart2text",
     ["country", "users in millions"],
     [["india", "349"], ["china", "257"], ["united states", "120"]],
     "India leads with 349 million users, almost three times the united states."),
    ("chart2text",
     ["quarter", "revenue"],
     [["q1", "12.4"], ["q2", "13.1"], ["q3", "11.8"], ["q4", "14.9"]],
     "Revenue peaked in the fourth quarter at 14.9 billion."),
    ("chart2text",
     ["age group", "daily minutes"],
     [["18-29", "95"], ["30-49", "63"], ["50-64", "38"], ["65+", "21"]],
     "Younger adults spend by far the most time, 95 minutes a day."),
    ("chart2text",
     ["brand", "loyalty score"],
     [["apple", "87"], ["samsung", "74"], ["xiaomi", "66"]],
     "Apple holds the highest loyalty score at 87 points."),
]


def main() -> int:
    schemas = {obj["db_id"]: schema_from_dict(obj) for obj in SCHEMAS}

    records = []
    for i, (db_id, question, vql) in enumerate(TEXT2VIS, start=1):
        parsed = parse_vql(vql)
        assert serialize_vql(parsed) == vql, f"query {i} does not round-trip: {vql}"
        normalized = normalize_vql(parsed, schemas[db_id])
        assert normalized == parsed, f"query {i} is not normalized: {vql}"
        records.append(Text2VisRecord(id=i, db_id=db_id, question=question, vql=vql))

    visqa_records = []
    for i, (db_id, question, answer, vql, qtype, table) in enumerate(VISQA, start=1):
        parsed = parse_vql(vql)
        assert normalize_vql(parsed, schemas[db_id]) == parsed, f"visqa {i} not normalized"
        data = None
        if table is not None:
            data = DataTable(
                headers=tuple(table["headers"]),
                rows=tuple(tuple(r) for r in table["rows"]),
            )
        visqa_records.append(
            VisQARecord(id=i, db_id=db_id, question=question, answer=answer,
                        vql=vql, question_type=qtype, table=data)
        )

    tabletext_records = [
        TableTextRecord(
            id=i,
            source=source,
            table=DataTable(headers=tuple(headers), rows=tuple(tuple(r) for r in rows)),
            description=description,
        )
        for i, (source, headers, rows, description) in enumerate(TABLETEXT, start=1)
    ]

    dump_jsonl(HERE / "schemas.jsonl", SCHEMAS)
    write_dataset(records, HERE / "text2vis.jsonl")
    write_dataset(visqa_records, HERE / "visqa.jsonl")
    write_dataset(tabletext_records, HERE / "tabletext.jsonl")
    (HERE / "queries_normalized.txt").write_text(
        "".join(q + "\n" for _, _, q in TEXT2VIS), encoding="utf-8"
    )
    print(f"wrote {len(records)} text2vis, {len(visqa_records)} visqa, "
          f"{len(tabletext_records)} tabletext records, {len(SCHEMAS)} schemas")
    return 0


if __name__ == "__main__":
    sys.exit(main())
