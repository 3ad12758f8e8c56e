"""Rendered reports: delimited tables plus matplotlib figures.

The CLI's ``stats`` and ``freq`` report paths emit TSV on stdout and can
additionally render a bar-chart figure to a file.  matplotlib is imported
lazily so plain queries never pay for it.
"""

from __future__ import annotations

from pathlib import Path

from .search import FrequencyResult, StatsTable


def stats_tsv(table: StatsTable) -> str:
    """Delimited rows, one bucket per line, totals row last."""
    lines = []
    if table.dimension == "by_corpus":
        lines.append("language\tcorpus_type\tcount")
        lines.extend(f"{r['language']}\t{r['corpus_type']}\t{r['count']}" for r in table.rows)
    elif table.dimension == "by_genre":
        lines.append("language\tgenre\tcount")
        lines.extend(f"{r['language']}\t{r['genre']}\t{r['count']}" for r in table.rows)
    else:
        lines.append("series\tyear\tcount")
        lines.extend(f"{r['series']}\t{r['year']}\t{r['count']}" for r in table.rows)
    lines.append(f"total\t\t{table.total}")
    return "\n".join(lines) + "\n"


def freq_tsv(result: FrequencyResult) -> str:
    lines = [f"{item}\t{count}" for item, count in result.items]
    return "\n".join(lines) + ("\n" if lines else "")


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_stats_figure(table: StatsTable, path: str | Path) -> Path:
    """Bar chart of the stats table, grouped like the TSV rows."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(10, 5))
    if table.dimension == "by_year":
        series: dict[str, list[tuple[int, int]]] = {}
        for row in table.rows:
            series.setdefault(row["series"], []).append((row["year"], row["count"]))
        for name, points in series.items():
            points.sort()
            ax.plot([y for y, _ in points], [c for _, c in points],
                    marker="o", label=name)
        ax.set_xlabel("year")
        ax.legend()
    else:
        key = "corpus_type" if table.dimension == "by_corpus" else "genre"
        labels = [f"{r['language']}:{r[key]}" for r in table.rows]
        counts = [r["count"] for r in table.rows]
        ax.bar(range(len(labels)), counts, color="#4878a8")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("texts")
    ax.set_title(f"Corpus statistics: {table.dimension} (total {table.total})")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def render_frequency_figure(result: FrequencyResult, path: str | Path,
                            top: int = 25) -> Path:
    plt = _pyplot()
    items = result.items[:top]
    fig, ax = plt.subplots(figsize=(10, max(3, 0.3 * len(items) + 1)))
    labels = [item for item, _ in items]
    counts = [count for _, count in items]
    ax.barh(range(len(items))[::-1] if items else [], counts, color="#4878a8")
    ax.set_yticks(range(len(items))[::-1] if items else [])
    ax.set_yticklabels(labels)
    ax.set_xlabel("occurrences")
    ax.set_title(f"Most frequent {result.unit}s")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
