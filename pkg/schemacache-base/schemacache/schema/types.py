
import dataclasses

FORMAT_VERSION = 1

@dataclasses.dataclass(frozen=True)
class ColumnDef:
    name : str
    description : str = ""
    is_primary_key : bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("Column name cannot be empty")

    @staticmethod
    def from_dict(d):
        return ColumnDef(
            name=d["name"],
            description=d.get("description", ""),
            is_primary_key=bool(d.get("is_primary_key", False)),
        )

    def to_dict(self):
        return {
            "name": self.name,
            "description": self.description,
            "is_primary_key": self.is_primary_key,
        }

@dataclasses.dataclass(frozen=True)
class ForeignKey:
    column : str
    ref_table : int
    ref_column : str

    @staticmethod
    def from_dict(d):
        return ForeignKey(
            column=d["column"],
            ref_table=int(d["ref_table"]),
            ref_column=d["ref_column"],
        )

    def to_dict(self):
        return {
            "column": self.column,
            "ref_table": self.ref_table,
            "ref_column": self.ref_column,
        }

@dataclasses.dataclass(frozen=True)
class TableSchema:
    table_id : int
    name : str
    columns : tuple[ColumnDef, ...] = ()
    foreign_keys : tuple[ForeignKey, ...] = ()

    def __post_init__(self):

        # Lists are accepted for convenience, stored as tuples
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "foreign_keys", tuple(self.foreign_keys))

        if self.table_id < 0:
            raise ValueError(f"Table id {self.table_id} is negative")

        if not self.name:
            raise ValueError("Table name cannot be empty")

        names = { c.name for c in self.columns }

        for fk in self.foreign_keys:
            if fk.column not in names:
                raise ValueError(
                    f"Table {self.name}: foreign key column {fk.column} "
                    "is not a column"
                )

    def column(self, name):
        for c in self.columns:
            if c.name == name: return c
        return None

    @staticmethod
    def from_dict(d):
        return TableSchema(
            table_id=int(d["table_id"]),
            name=d["name"],
            columns=[ColumnDef.from_dict(c) for c in d.get("columns", [])],
            foreign_keys=[
                ForeignKey.from_dict(f) for f in d.get("foreign_keys", [])
            ],
        )

    def to_dict(self):
        return {
            "table_id": self.table_id,
            "name": self.name,
            "columns": [ c.to_dict() for c in self.columns ],
            "foreign_keys": [ f.to_dict() for f in self.foreign_keys ],
        }

@dataclasses.dataclass(frozen=True)
class WorkloadQuery:
    query_id : str
    text : str

    @staticmethod
    def from_dict(d):
        return WorkloadQuery(query_id=str(d["query_id"]), text=d["text"])

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "query_id": self.query_id,
            "text": self.text,
        }

