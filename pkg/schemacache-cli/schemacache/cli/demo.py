"""
Synthetic demo assets: a 12-table corpus with a 4-table foreign key chain,
and a workload whose queries alternate between two hot table clusters.
"""

import logging
import os
import random

from .. schema import TableSchema, ColumnDef, ForeignKey, WorkloadQuery
from .. schema import save_corpus, save_workload
from . serialize import serialize_corpus

logger = logging.getLogger(__name__)

CORPUS_FILE = "corpus.json"
WORKLOAD_FILE = "workload.jsonl"

default_query_count = 200

def _table(table_id, name, columns, foreign_keys=()):
    return TableSchema(
        table_id=table_id,
        name=name,
        columns=[
            ColumnDef(n, d, is_primary_key=(ix == 0))
            for ix, (n, d) in enumerate(columns)
        ],
        foreign_keys=[ ForeignKey(*fk) for fk in foreign_keys ],
    )

def demo_corpus():

    return [
        _table(0, "customers", [
            ("customer_id", "unique customer number"),
            ("name", "full name"),
            ("city", "city of residence"),
        ]),
        _table(1, "orders", [
            ("order_id", "unique order number"),
            ("customer_id", "customer who placed the order"),
            ("order_date", "date the order was placed"),
        ], [ ("customer_id", 0, "customer_id") ]),
        _table(2, "order_items", [
            ("item_id", "unique line item number"),
            ("order_id", "order the item belongs to"),
            ("quantity", "units ordered"),
        ], [ ("order_id", 1, "order_id") ]),
        _table(3, "shipments", [
            ("shipment_id", "unique shipment number"),
            ("item_id", "line item shipped"),
            ("carrier", "shipping company"),
        ], [ ("item_id", 2, "item_id") ]),
        _table(4, "employees", [
            ("employee_id", "unique employee number"),
            ("name", "full name"),
            ("hired", "hiring date"),
        ]),
        _table(5, "payroll", [
            ("payment_id", "unique payment number"),
            ("employee_id", "employee paid"),
            ("amount", "gross amount paid"),
        ], [ ("employee_id", 4, "employee_id") ]),
        _table(6, "departments", [
            ("department_id", "unique department number"),
            ("title", "department name"),
        ]),
        _table(7, "offices", [
            ("office_id", "unique office number"),
            ("address", "street address"),
            ("capacity", "number of desks"),
        ]),
        _table(8, "weather_stations", [
            ("station_id", "unique station number"),
            ("region", "region covered"),
        ]),
        _table(9, "readings", [
            ("reading_id", "unique reading number"),
            ("station_id", "station that recorded it"),
            ("temperature", "degrees celsius"),
        ], [ ("station_id", 8, "station_id") ]),
        _table(10, "sensors", [
            ("sensor_id", "unique sensor number"),
            ("model", "hardware model"),
        ]),
        _table(11, "maintenance_logs", [
            ("log_id", "unique log entry number"),
            ("note", "technician note"),
        ]),
    ]

# Hot clusters: tables each cluster's queries reference
CLUSTERS = [
    (0, 1, 2, 3),
    (4, 5, 6, 7),
]

QUESTIONS = [
    [
        "How many orders did each customer place?",
        "Which carrier shipped the most items?",
        "List customers with an order shipped last week.",
        "What is the average quantity per order?",
    ],
    [
        "What is the total payroll per department?",
        "Which office has the most employees?",
        "List employees hired this year.",
        "How much was paid to each employee?",
    ],
]

def demo_workload(schemas, count=default_query_count, shuffle_tables=False,
                  seed=0):
    """
    Query i draws on cluster i % 2.  Each prompt is the cluster's table
    serializations followed by a question; with shuffle_tables the tables
    appear in a seeded random order.
    """

    texts = serialize_corpus(schemas)
    rng = random.Random(seed)

    queries = []

    for i in range(count):

        c = i % len(CLUSTERS)
        tables = list(CLUSTERS[c])

        if shuffle_tables:
            rng.shuffle(tables)

        questions = QUESTIONS[c]
        question = questions[(i // len(CLUSTERS)) % len(questions)]

        text = "".join(texts[t] for t in tables) + f"Question: {question}"

        queries.append(WorkloadQuery(query_id=f"q{i:03d}", text=text))

    return queries

def make_demo(out_dir, seed=0, shuffle_tables=False,
              count=default_query_count):
    """Writes corpus.json and workload.jsonl, returns their paths"""

    os.makedirs(out_dir, exist_ok=True)

    schemas = demo_corpus()

    corpus = os.path.join(out_dir, CORPUS_FILE)
    workload = os.path.join(out_dir, WORKLOAD_FILE)

    save_corpus(schemas, corpus)
    save_workload(
        demo_workload(schemas, count, shuffle_tables, seed), workload
    )

    logger.info(f"Demo assets written to {out_dir}")

    return corpus, workload

