//! Egg-box output: paired `P`/`W` boxes for sandwich-regular elements, plain
//! boxes of the sandwich semigroup otherwise.

use anyhow::bail;

use sandwich_core::category::ObjectId;
use sandwich_core::fiber::{build_frame, hat_analysis, is_sandwich_regular, paired_eggboxes, render_pairs_dot, render_pairs_text};
use sandwich_core::green::EggBox;
use sandwich_core::sandwich::{sandwich, Ambient};

/// Default largest number of cells a single egg-box may have.
pub const LAYOUT_CAP: usize = 400;

#[derive(Debug)]
pub struct LayoutCapExceeded {
    pub cells: usize,
    pub cap: usize,
}

impl std::fmt::Display for LayoutCapExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "an egg-box has {} cells, above the layout cap of {}", self.cells, self.cap)
    }
}

impl std::error::Error for LayoutCapExceeded {}

pub struct Rendered {
    pub text: String,
    pub dot: String,
}

fn check_cap<'b>(boxes: impl IntoIterator<Item = &'b EggBox>, cap: usize) -> anyhow::Result<()> {
    for b in boxes {
        let cells = b.row_count() * b.col_count();
        if cells > cap {
            bail!(LayoutCapExceeded { cells, cap });
        }
    }
    Ok(())
}

/// Paired `P`/`W` boxes when `a` is sandwich-regular; with `whole`, or when
/// `a` is not sandwich-regular, the D-classes of the sandwich semigroup itself.
pub fn eggboxes(amb: &Ambient, (i, j, a): (ObjectId, ObjectId, usize), whole: bool, cap: usize) -> anyhow::Result<Rendered> {
    let sw = sandwich(amb, i, j, a)?;
    let c = amb.category();
    let header = format!("# {} {:?}  i={} j={} a={}\n", c.kind(), c.sizes(), i, j, c.morphism(a).payload_label());
    let regular = is_sandwich_regular(&sw);
    if regular && !whole {
        let frame = build_frame(&sw, None)?;
        let hat = hat_analysis(&frame)?;
        let pairs = paired_eggboxes(&frame, &hat);
        check_cap(pairs.iter().flat_map(|(p, w)| [p, w]), cap)?;
        return Ok(Rendered {
            text: header + &render_pairs_text(&frame, &pairs),
            dot: render_pairs_dot(&frame, &pairs),
        });
    }
    let g = sw.green();
    let boxes: Vec<EggBox> = (0..g.d().len()).map(|d| g.eggbox(d)).collect();
    check_cap(&boxes, cap)?;
    let label = |x: usize| c.morphism(sw.global(x)).payload_label();
    let mut text = header;
    if regular {
        text.push_str("(D-classes of the sandwich semigroup)\n");
    } else {
        text.push_str("(a is not sandwich-regular: D-classes of the sandwich semigroup)\n");
    }
    for b in &boxes {
        text.push_str(&b.render_text(&label));
        text.push('\n');
    }
    let named: Vec<(String, &EggBox)> = boxes.iter().enumerate().map(|(k, b)| (format!("D{k}"), b)).collect();
    Ok(Rendered {
        text,
        dot: EggBox::dot_document(&named, &label),
    })
}
