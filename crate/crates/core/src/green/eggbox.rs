//! Egg-box layout of a single D-class, with text and DOT rendering.
//!
//! Rows are R-classes, columns are L-classes, cells are H-classes. Rows and
//! columns may additionally be grouped into blocks (for instance by a coarser
//! pair of relations); block boundaries are drawn bold.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::GreenData;
use crate::report::Checker;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EggBox {
    pub d_class: usize,
    /// Members of each row (R-class), ordered by minimal member within blocks.
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
    /// `cells[r][c]` lists the members of that H-class.
    pub cells: Vec<Vec<Vec<usize>>>,
    pub group: Vec<Vec<bool>>,
    /// Block label per row and per column; all zeros when unblocked.
    pub row_blocks: Vec<usize>,
    pub col_blocks: Vec<usize>,
}

impl EggBox {
    /// Lay out D-class `d`. `blocks` maps an element to its (row block, column block).
    pub fn from_green(
        g: &GreenData,
        d: usize,
        blocks: Option<&dyn Fn(usize) -> (usize, usize)>,
    ) -> Self {
        let members = g.d().class(d);
        let mut row_ids: Vec<usize> = members.iter().map(|&x| g.r().class_of(x)).collect();
        let mut col_ids: Vec<usize> = members.iter().map(|&x| g.l().class_of(x)).collect();
        row_ids.sort_unstable();
        row_ids.dedup();
        col_ids.sort_unstable();
        col_ids.dedup();
        let block_of = |x: usize| blocks.map_or((0, 0), |f| f(x));
        let mut rows: Vec<(usize, Vec<usize>)> = row_ids
            .iter()
            .map(|&r| {
                let m = g.r().class(r).to_vec();
                (block_of(m[0]).0, m)
            })
            .collect();
        let mut cols: Vec<(usize, Vec<usize>)> = col_ids
            .iter()
            .map(|&l| {
                let m = g.l().class(l).to_vec();
                (block_of(m[0]).1, m)
            })
            .collect();
        // stable sort keeps minimal-member order inside each block
        let block_rank = |v: &[(usize, Vec<usize>)]| {
            let mut firsts: Vec<(usize, usize)> = Vec::new();
            for (b, m) in v {
                if !firsts.iter().any(|&(fb, _)| fb == *b) {
                    firsts.push((*b, m[0]));
                }
            }
            firsts
        };
        let rr = block_rank(&rows);
        let cr = block_rank(&cols);
        rows.sort_by_key(|(b, _)| rr.iter().position(|&(fb, _)| fb == *b));
        cols.sort_by_key(|(b, _)| cr.iter().position(|&(fb, _)| fb == *b));
        let cells: Vec<Vec<Vec<usize>>> = rows
            .iter()
            .map(|(_, r)| {
                cols.iter()
                    .map(|(_, c)| r.iter().copied().filter(|x| c.contains(x)).collect())
                    .collect()
            })
            .collect();
        let group = cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell: &Vec<usize>| cell.first().is_some_and(|&x| g.is_group_h(x)))
                    .collect()
            })
            .collect();
        Self {
            d_class: d,
            row_blocks: rows.iter().map(|(b, _)| *b).collect(),
            col_blocks: cols.iter().map(|(b, _)| *b).collect(),
            rows: rows.into_iter().map(|(_, m)| m).collect(),
            cols: cols.into_iter().map(|(_, m)| m).collect(),
            cells,
            group,
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    /// Every cell nonempty and all cells of equal size.
    pub fn check(&self) -> Checker {
        let mut ck = Checker::new();
        let size = self.cells[0][0].len();
        for row in &self.cells {
            for cell in row {
                ck.check(!cell.is_empty(), "egg-box cell nonempty", Vec::new);
                ck.check(cell.len() == size, "egg-box cells equal size", || cell.clone());
            }
        }
        ck
    }

    fn bold_after(blocks: &[usize], k: usize) -> bool {
        k + 1 < blocks.len() && blocks[k] != blocks[k + 1]
    }

    /// Fixed-width text grid; `#` marks group cells, `‖` and `=` mark block boundaries.
    pub fn render_text(&self, label: &dyn Fn(usize) -> String) -> String {
        let text: Vec<Vec<String>> = self
            .cells
            .iter()
            .zip(&self.group)
            .map(|(row, flags)| {
                row.iter()
                    .zip(flags)
                    .map(|(cell, &grp)| {
                        let body = cell.iter().map(|&x| label(x)).collect::<Vec<_>>().join(",");
                        if grp {
                            format!("#{body}")
                        } else {
                            body
                        }
                    })
                    .collect()
            })
            .collect();
        let width: Vec<usize> = (0..self.col_count())
            .map(|c| text.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let rule = |ch: char| {
            let mut line = String::from("+");
            for (c, w) in width.iter().enumerate() {
                line.push_str(&ch.to_string().repeat(w + 2));
                line.push(if Self::bold_after(&self.col_blocks, c) { '#' } else { '+' });
            }
            line
        };
        let mut out = String::new();
        let _ = writeln!(out, "D-class {}", self.d_class);
        out.push_str(&rule('-'));
        out.push('\n');
        for (r, row) in text.iter().enumerate() {
            out.push('|');
            for (c, cell) in row.iter().enumerate() {
                let pad = width[c] - cell.chars().count();
                let sep = if Self::bold_after(&self.col_blocks, c) { '‖' } else { '|' };
                let _ = write!(out, " {cell}{} {sep}", " ".repeat(pad));
            }
            out.push('\n');
            let ch = if Self::bold_after(&self.row_blocks, r) { '=' } else { '-' };
            out.push_str(&rule(ch));
            out.push('\n');
        }
        out
    }

    /// One DOT cluster holding an HTML-like table; block boundaries get thick borders.
    pub fn render_dot_cluster(&self, name: &str, label: &dyn Fn(usize) -> String) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "  subgraph cluster_{name} {{");
        let _ = writeln!(out, "    label=\"{name}: D-class {}\";", self.d_class);
        let _ = writeln!(
            out,
            "    {name} [shape=plaintext, label=<<TABLE BORDER=\"0\" CELLBORDER=\"1\" CELLSPACING=\"0\">"
        );
        for (r, row) in self.cells.iter().enumerate() {
            out.push_str("      <TR>");
            for (c, cell) in row.iter().enumerate() {
                let body = cell
                    .iter()
                    .map(|&x| html_escape(&label(x)))
                    .collect::<Vec<_>>()
                    .join(", ");
                let mut attrs = String::new();
                if self.group[r][c] {
                    attrs.push_str(" BGCOLOR=\"lightgrey\"");
                }
                let mut sides = String::new();
                if Self::bold_after(&self.col_blocks, c) {
                    sides.push('R');
                }
                if Self::bold_after(&self.row_blocks, r) {
                    sides.push('B');
                }
                if sides.is_empty() {
                    let _ = write!(out, "<TD{attrs}>{body}</TD>");
                } else {
                    // a thick-bordered wrapper marks the block edge
                    let _ = write!(
                        out,
                        "<TD{attrs} BORDER=\"3\" SIDES=\"{sides}\">{body}</TD>"
                    );
                }
            }
            out.push_str("</TR>\n");
        }
        out.push_str("    </TABLE>>];\n  }\n");
        out
    }

    /// A standalone DOT document for one or more egg-boxes.
    pub fn dot_document(boxes: &[(String, &EggBox)], label: &dyn Fn(usize) -> String) -> String {
        let mut out = String::from("digraph eggbox {\n  node [fontname=\"monospace\"];\n");
        for (name, b) in boxes {
            out.push_str(&b.render_dot_cluster(name, label));
        }
        out.push_str("}\n");
        out
    }
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
