use equicube::classify::{essential_histogram, Cell, ClassificationReport, HistogramRow};
use equicube::Result;
use serde::Serialize;

/// A classification table: rows by color count (with the `2'` sub-row of
/// 2-colorings that split into a perfect coloring with more colors) and
/// columns by number of essential arguments. A cell `a(b)` counts `a`
/// classes meeting the constraint with equality and `b` classes with room
/// to spare.
#[derive(Clone, Debug, Serialize)]
pub struct RenderedTable {
    #[serde(skip)]
    pub text: String,
    pub n: u32,
    pub constraint: String,
    pub columns: Vec<u32>,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub label: String,
    pub cells: Vec<Cell>,
    pub total: Cell,
}

fn row_of(r: &HistogramRow, columns: &[u32]) -> TableRow {
    TableRow { label: r.label.clone(), cells: columns.iter().map(|&m| r.cell(m)).collect(), total: r.total }
}

pub fn render_table(report: &ClassificationReport) -> Result<RenderedTable> {
    let h = essential_histogram(report)?;
    let max = h.total.cells.keys().max().copied().unwrap_or(0);
    let columns: Vec<u32> = (1..=max).collect();
    let mut rows: Vec<TableRow> = h.rows.iter().map(|r| row_of(r, &columns)).collect();
    if !rows.is_empty() {
        rows.push(row_of(&h.total, &columns));
    }
    let mut grid: Vec<Vec<String>> = vec![std::iter::once("k".to_string())
        .chain(columns.iter().map(|m| m.to_string()))
        .chain(std::iter::once("total".into()))
        .collect()];
    for r in &rows {
        grid.push(
            std::iter::once(r.label.clone())
                .chain(r.cells.iter().map(|c| c.to_string()))
                .chain(std::iter::once(r.total.to_string()))
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..grid[0].len()).map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    let mut text = String::new();
    for r in &grid {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
        text.push_str(cells.join(" ").trim_end());
        text.push('\n');
    }
    Ok(RenderedTable { text, n: report.n, constraint: report.constraint.to_string(), columns, rows })
}
