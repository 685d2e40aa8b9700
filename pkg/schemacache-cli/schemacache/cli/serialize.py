
def serialize_table(schema, names=None):
    """
    Canonical text of one table: a name line, then one line per column
    with key annotations and description.  names maps table_id -> name for
    foreign key targets.
    """

    refs = { fk.column: fk for fk in schema.foreign_keys }

    lines = [ f"Table: {schema.name}" ]

    for col in schema.columns:

        line = f"  - {col.name}"

        if col.is_primary_key:
            line += " (primary key)"

        fk = refs.get(col.name)
        if fk:
            target = names.get(fk.ref_table) if names else None
            target = target or f"table {fk.ref_table}"
            line += f" (references {target}.{fk.ref_column})"

        if col.description:
            line += f": {col.description}"

        lines.append(line)

    return "\n".join(lines) + "\n"

def serialize_corpus(schemas):
    """table_id -> text for a whole corpus"""

    names = { s.table_id: s.name for s in schemas }

    return {
        s.table_id: serialize_table(s, names)
        for s in schemas
    }

