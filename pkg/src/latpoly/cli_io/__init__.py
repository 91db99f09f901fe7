"""Command line, count-table persistence and run manifests."""

from .manifest import RunManifest, manifest_id
from .tables import TableKey, TableStore

__all__ = ["RunManifest", "TableKey", "TableStore", "manifest_id"]
