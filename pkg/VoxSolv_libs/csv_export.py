# CSV export of descent traces and convergence studies

import os
import csv
from typing import Dict, List, TextIO, Any

TRACE_HEADER = ['flip', 'cell', 'i', 'j', 'k', 'delta_g', 'energy']
AREA_STUDY_HEADER = ['n', 'h', 'kappa', 'trials', 'mean_rel_err', 'kernel_bias', 'slope_so_far']
ENERGY_STUDY_HEADER = ['n', 'h', 'kappa', 'trials', 'surf_rel_err', 'vdw_rel_err', 'elec_rel_err', 'total_rel_err', 'slope_so_far']

class CSVExporter:
    """
    Row-wise CSV writer with a fixed header, one file per exporter.
    Floats are written with repr precision so studies can be re-plotted without loss.
    """

    def __init__(self, save_path: str, header: List[str]):
        """
        Args:
            save_path: CSV file to create (parent directory is created)
            header: column names, every row must have the same length
        """
        self.save_path = save_path
        self.header = list(header)
        self.num_rows = 0
        directory = os.path.dirname(os.path.abspath(save_path))
        os.makedirs(directory, exist_ok=True)
        self.csv_file: TextIO = open(save_path, 'w', newline='', encoding='utf-8')
        self.csv_writer = csv.writer(self.csv_file)
        self.csv_writer.writerow(self.header)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close_file()

    def export_row(self, row: List[Any]) -> None:
        assert len(row) == len(self.header), 'error, row has %d values for %d columns' % (len(row), len(self.header))
        self.csv_writer.writerow([repr(float(value)) if isinstance(value, float) else value for value in row])
        self.num_rows += 1

    def export_dict(self, row: Dict[str, Any]) -> None:
        self.export_row([row[key] for key in self.header])

    def flush(self) -> None:
        self.csv_file.flush()

    def close_file(self) -> None:
        if self.csv_file and not self.csv_file.closed:
            self.csv_file.close()

    def get_export_summary(self) -> str:
        file_size = os.path.getsize(self.save_path) / 1024 if os.path.exists(self.save_path) else 0.0
        return '%s (%d records, %.1f KB)' % (self.save_path, self.num_rows, file_size)


def export_trace_csv(save_path: str, trace, grid) -> str:
    """
    One row per flip plus the initial state (flip 0, cell -1).

    Args:
        save_path: CSV file to create
        trace: EnergyTrace of a minimize run
        grid: Grid the cell indices refer to
    """
    energies = trace.energies
    with CSVExporter(save_path, TRACE_HEADER) as exporter:
        exporter.export_row([0, -1, -1, -1, -1, 0.0, float(energies[0])])
        for step, (cell, delta) in enumerate(zip(trace.cells.tolist(), trace.delta_g.tolist()), start=1):
            i, j, k = grid.multi_index(cell)
            exporter.export_row([step, cell, i, j, k, delta, float(energies[step])])
        return exporter.get_export_summary()


def load_csv_rows(file_path: str) -> List[Dict[str, str]]:
    """Rows of a CSV written by CSVExporter as dicts keyed by the header."""
    with open(file_path, 'r', newline='', encoding='utf-8') as csv_file:
        return list(csv.DictReader(csv_file))
