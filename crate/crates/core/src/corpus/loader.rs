use super::{FormatHint, Modality, ModalityChunk, RawDocument};
use crate::grid::{self, Separator};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LineKind {
    Grid,
    Image,
    Other,
}

struct Line<'a> {
    start: usize,
    end: usize,
    text: &'a str,
    kind: LineKind,
}

fn image_ref(line: &str) -> bool {
    let t = line.trim();
    t.starts_with("![") && t.ends_with(')') && t.contains("](")
}

fn classify(text: &str, hint: FormatHint) -> LineKind {
    let grid_line = match hint {
        FormatHint::Plain => grid::split_row(text, Separator::Tab).is_some(),
        FormatHint::MarkdownLike => grid::split_row(text, Separator::Pipe).is_some(),
        FormatHint::PreSegmented => grid::split_any(text).is_some(),
    };
    if grid_line {
        LineKind::Grid
    } else if hint != FormatHint::Plain && image_ref(text) {
        LineKind::Image
    } else {
        LineKind::Other
    }
}

fn lines_of(text: &str, hint: FormatHint) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in text.split_inclusive('\n') {
        let end = start + piece.len();
        let body = piece.trim_end_matches(['\n', '\r']);
        out.push(Line { start, end, text: body, kind: classify(body, hint) });
        start = end;
    }
    out
}

fn serialize_table(lines: &[Line<'_>], hint: FormatHint) -> String {
    lines
        .iter()
        .filter_map(|l| match hint {
            FormatHint::Plain => grid::split_row(l.text, Separator::Tab),
            FormatHint::MarkdownLike => grid::split_row(l.text, Separator::Pipe),
            FormatHint::PreSegmented => grid::split_any(l.text).map(|(_, c)| c),
        })
        .filter(|cells| !grid::is_rule_row(cells))
        .map(|cells| cells.join(" | "))
        .collect::<Vec<_>>()
        .join("\n")
}

struct Region {
    modality: Modality,
    first: usize,
    last: usize,
}

/// Split a document into text, table and image chunks in document order.
///
/// A table is a run of at least two consecutive grid lines (tab-separated for
/// `plain`, pipe-separated for `markdown-like`, either for `pre-segmented`).
/// Image chunks come from `![alt](ref)` lines. Everything else is text;
/// whitespace-only regions are absorbed into a neighbouring chunk so the
/// chunk spans tile the document.
pub fn load_document(doc: &RawDocument) -> Result<Vec<ModalityChunk>> {
    if doc.text.trim().is_empty() {
        return Err(Error::EmptyDocument);
    }
    let hint = doc.format_hint;
    let mut lines = lines_of(&doc.text, hint);

    // Isolated grid lines are text.
    let n = lines.len();
    for i in 0..n {
        if lines[i].kind == LineKind::Grid {
            let prev = i > 0 && lines[i - 1].kind == LineKind::Grid;
            let next = i + 1 < n && lines[i + 1].kind == LineKind::Grid;
            if !prev && !next {
                lines[i].kind = LineKind::Other;
            }
        }
    }

    let mut regions: Vec<Region> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let modality = match line.kind {
            LineKind::Grid => Modality::Table,
            LineKind::Image => Modality::Image,
            LineKind::Other => Modality::Text,
        };
        let blank = line.text.trim().is_empty();
        let continues = match regions.last() {
            Some(r) if r.modality == modality => match modality {
                Modality::Table => true,
                Modality::Image => false,
                Modality::Text => !(hint == FormatHint::PreSegmented && blank),
            },
            _ => false,
        };
        if continues {
            regions.last_mut().unwrap().last = i;
        } else {
            regions.push(Region { modality, first: i, last: i });
        }
    }

    // Fold whitespace-only text regions into the previous region, or the next
    // one when there is no previous region.
    let is_blank = |r: &Region| {
        r.modality == Modality::Text && lines[r.first..=r.last].iter().all(|l| l.text.trim().is_empty())
    };
    let mut merged: Vec<Region> = Vec::new();
    let mut pending_first: Option<usize> = None;
    for r in regions {
        if is_blank(&r) {
            match merged.last_mut() {
                Some(prev) => prev.last = r.last,
                None => pending_first = Some(pending_first.unwrap_or(r.first)),
            }
            continue;
        }
        let first = pending_first.take().unwrap_or(r.first);
        if hint == FormatHint::PreSegmented || r.modality != Modality::Text {
            merged.push(Region { first, ..r });
        } else {
            match merged.last_mut() {
                Some(prev) if prev.modality == Modality::Text && prev.last + 1 == r.first => prev.last = r.last,
                _ => merged.push(Region { first, ..r }),
            }
        }
    }

    let chunks = merged
        .into_iter()
        .enumerate()
        .map(|(order_index, r)| {
            let span = lines[r.first].start..lines[r.last].end;
            let raw = &doc.text[span.clone()];
            let content = match r.modality {
                Modality::Table => serialize_table(&lines[r.first..=r.last], hint),
                Modality::Text | Modality::Image => raw.trim().to_string(),
            };
            ModalityChunk {
                id: format!("{}#c{order_index}", doc.id),
                doc_id: doc.id.clone(),
                modality: r.modality,
                content,
                order_index,
                byte_range: span,
            }
        })
        .collect();
    Ok(chunks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(text: &str) -> RawDocument {
        RawDocument::new("d", text, FormatHint::MarkdownLike)
    }

    fn kinds(chunks: &[ModalityChunk]) -> Vec<Modality> {
        chunks.iter().map(|c| c.modality).collect()
    }

    #[test]
    fn paragraph_then_table() {
        let doc = md("Intro paragraph about services.\n\nA | B | C\n1 | 2 | 3\n4 | 5 | 6\n");
        let chunks = load_document(&doc).unwrap();
        assert_eq!(kinds(&chunks), vec![Modality::Text, Modality::Table]);
        assert_eq!(chunks[0].content, "Intro paragraph about services.");
        assert_eq!(chunks[1].content, "A | B | C\n1 | 2 | 3\n4 | 5 | 6");
    }

    #[test]
    fn table_only_preserves_rows() {
        let doc = md("Scenario Type | Data Rate | Delay\n4K On Demand Video | 30 Mbps | RTT < 100 ms");
        let chunks = load_document(&doc).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].modality, Modality::Table);
        assert_eq!(
            chunks[0].content,
            "Scenario Type | Data Rate | Delay\n4K On Demand Video | 30 Mbps | RTT < 100 ms"
        );
    }

    #[test]
    fn empty_document_rejected() {
        assert!(matches!(load_document(&md("")), Err(Error::EmptyDocument)));
        assert!(matches!(load_document(&md(" \n ")), Err(Error::EmptyDocument)));
    }

    #[test]
    fn markdown_rule_row_dropped() {
        let doc = md("| a | b |\n|---|---|\n| 1 | 2 |");
        let chunks = load_document(&doc).unwrap();
        assert_eq!(chunks[0].content, "a | b\n1 | 2");
    }

    #[test]
    fn single_grid_line_is_text() {
        let doc = md("Note: a | b is shorthand.\nSecond line.");
        let chunks = load_document(&doc).unwrap();
        assert_eq!(kinds(&chunks), vec![Modality::Text]);
    }

    #[test]
    fn image_line_is_reference_chunk() {
        let doc = md("Before.\n![Figure 1](fig1.png)\nAfter.");
        let chunks = load_document(&doc).unwrap();
        assert_eq!(kinds(&chunks), vec![Modality::Text, Modality::Image, Modality::Text]);
        assert_eq!(chunks[1].content, "![Figure 1](fig1.png)");
    }

    #[test]
    fn plain_hint_uses_tabs() {
        let doc = RawDocument::new("p", "x\ty\n1\t2\nnot | a table\nstill | text", FormatHint::Plain);
        let chunks = load_document(&doc).unwrap();
        assert_eq!(kinds(&chunks), vec![Modality::Table, Modality::Text]);
        assert_eq!(chunks[0].content, "x | y\n1 | 2");
    }

    #[test]
    fn pre_segmented_blocks_stay_separate() {
        let doc = RawDocument::new("s", "Block one.\n\nBlock two.\n\nA\tB\nC\tD", FormatHint::PreSegmented);
        let chunks = load_document(&doc).unwrap();
        assert_eq!(kinds(&chunks), vec![Modality::Text, Modality::Text, Modality::Table]);
    }

    #[test]
    fn spans_tile_document() {
        let text = "\n\nLead.\n\nA | B\nC | D\n\n\nE | F\nG | H\n\nTail text\n";
        let chunks = load_document(&md(text)).unwrap();
        let mut pos = 0;
        for (i, c) in chunks.iter().enumerate() {
            assert_eq!(c.order_index, i);
            assert_eq!(c.byte_range.start, pos);
            pos = c.byte_range.end;
        }
        assert_eq!(pos, text.len());
        assert_eq!(kinds(&chunks), vec![Modality::Text, Modality::Table, Modality::Table, Modality::Text]);
    }
}
