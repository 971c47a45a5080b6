//! Row-per-line table grids (`|` or tab separated).

use crate::text::match_key;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separator {
    Pipe,
    Tab,
}

impl Separator {
    fn as_char(self) -> char {
        match self {
            Separator::Pipe => '|',
            Separator::Tab => '\t',
        }
    }
}

/// Cells of a grid line, or `None` if the line has fewer than two cells.
pub fn split_row(line: &str, sep: Separator) -> Option<Vec<String>> {
    let c = sep.as_char();
    if !line.contains(c) {
        return None;
    }
    let mut body = line.trim_matches(|ch: char| ch == '\r' || ch == '\n');
    if sep == Separator::Pipe {
        body = body.trim();
        body = body.strip_prefix('|').unwrap_or(body);
        body = body.strip_suffix('|').unwrap_or(body);
    }
    let cells: Vec<String> = body.split(c).map(|s| s.trim().to_string()).collect();
    (cells.len() >= 2).then_some(cells)
}

/// Markdown rule rows such as `|---|:--:|`.
pub fn is_rule_row(cells: &[String]) -> bool {
    cells
        .iter()
        .all(|c| !c.is_empty() && c.chars().all(|ch| matches!(ch, '-' | ':' | '=' | '+')))
}

/// Either separator, preferring pipes.
pub fn split_any(line: &str) -> Option<(Separator, Vec<String>)> {
    split_row(line, Separator::Pipe)
        .map(|c| (Separator::Pipe, c))
        .or_else(|| split_row(line, Separator::Tab).map(|c| (Separator::Tab, c)))
}

/// One data row of a scenario table: the scenario name (first cell) and the
/// remaining `(column header, cell)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub name: String,
    pub cells: Vec<(String, String)>,
}

/// Scan free text for grids whose header's first cell starts with
/// "scenario" and return their data rows in order of appearance.
pub fn scenario_rows(text: &str) -> Vec<ScenarioRow> {
    let mut rows = Vec::new();
    let mut header: Option<(Separator, Vec<String>)> = None;
    for line in text.lines() {
        match (&header, split_any(line)) {
            (_, Some((sep, cells))) if match_key(&cells[0]).starts_with("scenario") => {
                header = Some((sep, cells));
            }
            (Some((hsep, hcells)), Some((sep, cells))) if *hsep == sep => {
                if is_rule_row(&cells) {
                    continue;
                }
                let name = cells[0].clone();
                if name.is_empty() {
                    continue;
                }
                let pairs = hcells
                    .iter()
                    .skip(1)
                    .zip(cells.iter().skip(1))
                    .map(|(h, v)| (h.clone(), v.clone()))
                    .collect();
                rows.push(ScenarioRow { name, cells: pairs });
            }
            _ => header = None,
        }
    }
    rows
}
