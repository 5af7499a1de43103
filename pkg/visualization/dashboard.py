"""
Visualization Dashboard Module
Charts and a static HTML report for enumeration counts: number of
normal forms per total length for each word bound L, laid out like the
published count table, with cells that no longer change marked.
"""
import json
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import OUTPUT_DIR, PROCESSED_DATA_DIR, TABLE1_REFERENCE

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    MATPLOTLIB_AVAILABLE = True
except ImportError:
    MATPLOTLIB_AVAILABLE = False
    print("Warning: matplotlib not available. Install with: pip install matplotlib")

# L -> {T -> count}
Columns = Dict[int, Dict[int, int]]


def stable_cells(columns: Columns) -> Dict[int, List[int]]:
    """
    For each L, the total lengths T whose count equals the count in the
    next larger computed column
    """
    bounds = sorted(columns)
    stable: Dict[int, List[int]] = {}
    for smaller, larger in zip(bounds, bounds[1:]):
        stable[smaller] = sorted(
            t for t, count in columns[smaller].items()
            if count and columns[larger].get(t) == count
        )
    return stable


def compare_with_reference(columns: Columns,
                           reference: Optional[Columns] = None) -> Dict[int, Dict[int, tuple]]:
    """Cells where a computed column disagrees with the reference: T -> (computed, expected)"""
    reference = TABLE1_REFERENCE if reference is None else reference
    mismatches: Dict[int, Dict[int, tuple]] = {}
    for bound, counts in columns.items():
        expected = reference.get(bound)
        if expected is None:
            continue
        cells = {
            t: (counts.get(t, 0), expected.get(t, 0))
            for t in sorted(set(counts) | set(expected))
            if counts.get(t, 0) != expected.get(t, 0)
        }
        if cells:
            mismatches[bound] = cells
    return mismatches


class CountsDashboard:
    """Generates charts and the HTML count table"""

    def __init__(self, output_dir: Path = None, processed_dir: Path = None):
        self.processed_dir = processed_dir or PROCESSED_DATA_DIR
        self.output_dir = output_dir or OUTPUT_DIR
        self.output_dir.mkdir(parents=True, exist_ok=True)

        self.colors = {
            "primary": "#007bff",
            "secondary": "#6c757d",
            "stable": "#d4edda",
            "mismatch": "#f8d7da",
            "BAUMSLAG_TYPE": "#dc3545",
            "BS_TYPE": "#ffc107",
            "UNCLASSIFIED": "#6c757d",
        }

    def load_columns(self) -> Optional[Columns]:
        """Load enumeration counts written by the experiment pipeline"""
        filepath = self.processed_dir / "table1_counts.json"
        if not filepath.exists():
            print(f"Enumeration counts not found: {filepath}")
            return None

        with open(filepath, "r", encoding="utf-8") as f:
            raw = json.load(f)
        return {
            int(bound): {int(t): int(count) for t, count in counts.items()}
            for bound, counts in raw.get("columns", {}).items()
        }

    def load_classification(self) -> Optional[Dict]:
        filepath = self.processed_dir / "classification_summary.json"
        if not filepath.exists():
            return None

        with open(filepath, "r", encoding="utf-8") as f:
            return json.load(f)

    def plot_counts(self, columns: Columns) -> Optional[Path]:
        """Line chart of counts per total length, one line per L"""
        if not MATPLOTLIB_AVAILABLE:
            print("Skipping plot - matplotlib not available")
            return None
        if not columns:
            return None

        fig, ax = plt.subplots(figsize=(10, 6))
        for bound in sorted(columns):
            counts = columns[bound]
            totals = sorted(counts)
            ax.plot(totals, [counts[t] for t in totals], marker="o", label=f"L = {bound}")

        ax.set_xlabel("Total length T")
        ax.set_ylabel("Normal forms")
        ax.set_yscale("log")
        ax.set_title("Normal forms per total length in the AC-component of AK(3)")
        ax.grid(True, alpha=0.3)
        ax.legend(loc="upper left")
        plt.tight_layout()

        output_path = self.output_dir / "counts_per_total_length.png"
        plt.savefig(output_path, dpi=150, bbox_inches="tight")
        plt.close()
        print(f"Saved: {output_path}")
        return output_path

    def plot_classification(self, summary: Dict) -> Optional[Path]:
        """Bar chart of relator classes"""
        if not MATPLOTLIB_AVAILABLE:
            return None

        counts = summary.get("counts", {})
        if not counts:
            return None
        tags = ["BAUMSLAG_TYPE", "BS_TYPE", "UNCLASSIFIED"]
        values = [counts.get(tag, 0) for tag in tags]

        fig, ax = plt.subplots(figsize=(8, 5))
        bars = ax.bar(tags, values, color=[self.colors[tag] for tag in tags])
        for bar, value in zip(bars, values):
            ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height(), f"{value}",
                    ha="center", va="bottom", fontsize=10)
        ax.set_ylabel("Relators")
        ax.set_title(f"Relator classes ({summary.get('total', sum(values))} relators)")
        plt.tight_layout()

        output_path = self.output_dir / "relator_classes.png"
        plt.savefig(output_path, dpi=150, bbox_inches="tight")
        plt.close()
        print(f"Saved: {output_path}")
        return output_path

    def generate_html_report(self, columns: Columns) -> str:
        """HTML table with one row per T and one column per L"""
        bounds = sorted(columns)
        totals = sorted({t for counts in columns.values() for t in counts})
        stable = stable_cells(columns)
        mismatches = compare_with_reference(columns)

        html_parts = ["""<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>AC-component enumeration counts</title>
    <style>
        body { font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif;
               margin: 0; padding: 20px; background: #f5f5f5; }
        .container { max-width: 1000px; margin: 0 auto; background: white;
                    padding: 30px; border-radius: 8px; box-shadow: 0 2px 4px rgba(0,0,0,0.1); }
        h1 { color: #1a1a1a; border-bottom: 2px solid #007bff; padding-bottom: 10px; }
        table { border-collapse: collapse; margin: 20px 0; }
        th, td { padding: 8px 14px; text-align: right; border-bottom: 1px solid #ddd; }
        th { background: #f8f9fa; font-weight: 600; }
        td.stable { background: #d4edda; }
        td.mismatch { background: #f8d7da; }
        .footer { margin-top: 40px; padding-top: 20px; border-top: 1px solid #ddd;
                 color: #666; font-size: 12px; }
    </style>
</head>
<body>
    <div class="container">
"""]
        html_parts.append(f"""
        <h1>Normal forms per total length</h1>
        <p>Generated: {datetime.now().strftime('%Y-%m-%d %H:%M')}</p>
        <table>
            <thead>
                <tr><th>T \\ L</th>{''.join(f'<th>{b}</th>' for b in bounds)}</tr>
            </thead>
            <tbody>
""")
        for t in totals:
            cells = []
            for bound in bounds:
                count = columns[bound].get(t, 0)
                css = ""
                if t in mismatches.get(bound, {}):
                    css = ' class="mismatch"'
                elif t in stable.get(bound, []):
                    css = ' class="stable"'
                cells.append(f"<td{css}>{count}</td>")
            html_parts.append(f"                <tr><th>{t}</th>{''.join(cells)}</tr>\n")

        html_parts.append("""            </tbody>
        </table>
        <p>Green cells agree with the next column; red cells differ from the reference counts.</p>
""")
        if (self.output_dir / "counts_per_total_length.png").exists():
            html_parts.append('        <img src="counts_per_total_length.png" alt="counts chart">\n')
        html_parts.append("""
        <div class="footer">Counts from the breadth-first enumeration seeded with AK(3), D = 2.</div>
    </div>
</body>
</html>
""")

        html_content = "".join(html_parts)
        output_path = self.output_dir / "counts_report.html"
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(html_content)
        print(f"Saved: {output_path}")
        return html_content

    def generate_all(self):
        """Generate all charts and the HTML report from the saved results"""
        print("=" * 70)
        print("Generating Visualizations")
        print("=" * 70)

        columns = self.load_columns()
        if columns is None:
            print("No enumeration counts available. Run run_experiments.py first.")
        else:
            if MATPLOTLIB_AVAILABLE:
                self.plot_counts(columns)
            else:
                print("\nSkipping charts - matplotlib not installed")
            self.generate_html_report(columns)

        summary = self.load_classification()
        if summary:
            self.plot_classification(summary)


def main():
    dashboard = CountsDashboard()
    dashboard.generate_all()


if __name__ == "__main__":
    main()
