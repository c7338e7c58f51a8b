use std::collections::HashMap;

use serde::Serialize;

use super::{DiagramError, Trapezium};
use crate::engine::Computation;
use crate::machines::MachineSpec;

/// Heights accepted by [`explicit_glue`].
pub const EXPLICIT_HEIGHT_CAP: usize = 10_000;

/// `k` copies of a trapezium side by side, alternating with mirror images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedDiagram {
    pub copies: u64,
    pub height: usize,
    pub top_len: usize,
    pub bottom_len: usize,
    /// Side labels shared by consecutive copies.
    pub seams: u64,
    pub area: u64,
    pub perimeter: u64,
}

pub fn glue(t: &Trapezium, k: u64) -> GluedDiagram {
    assert!(k >= 1, "at least one copy");
    let h = t.height() as u64;
    let ends = (t.top.len() + t.bottom.len()) as u64;
    GluedDiagram {
        copies: k,
        height: t.height(),
        top_len: t.top.len(),
        bottom_len: t.bottom.len(),
        seams: k - 1,
        area: k * t.area(),
        perimeter: k * ends + 2 * h,
    }
}

/// Counts from an explicit 2-complex: faces are bands, edges are letters of the level words and
/// θ-edges, seams are identified by union-find and checked label by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplicitComplex {
    pub faces: usize,
    pub edges: usize,
    pub boundary: u64,
    pub area: u64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

pub fn explicit_glue(m: &MachineSpec, c: &Computation, t: &Trapezium, k: usize) -> Result<ExplicitComplex, DiagramError> {
    let trace = c.trace.as_ref().ok_or(DiagramError::StreamedTraceUnsupported)?;
    let h = t.height();
    if h > EXPLICIT_HEIGHT_CAP {
        return Err(DiagramError::TooTall { height: h, cap: EXPLICIT_HEIGHT_CAP });
    }
    assert!(k >= 1, "at least one copy");
    let mut labels: Vec<String> = Vec::new();
    let new_edge = |labels: &mut Vec<String>, label: String| {
        labels.push(label);
        labels.len() - 1
    };
    // faces[f] = edges of band f
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut left_sides: Vec<Vec<usize>> = Vec::new();
    let mut right_sides: Vec<Vec<usize>> = Vec::new();
    let mut loose = 0u64;
    for copy in 0..k {
        let mirrored = copy % 2 == 1;
        let levels: Vec<Vec<usize>> = trace
            .iter()
            .map(|w| {
                let mut names: Vec<String> = w.letters().iter().map(|&l| m.alphabet.format_letter(l)).collect();
                if mirrored {
                    names.reverse();
                }
                names.into_iter().map(|s| new_edge(&mut labels, s)).collect()
            })
            .collect();
        if h == 0 {
            loose += 2 * levels[0].len() as u64;
        }
        let mut left = Vec::with_capacity(h);
        let mut right = Vec::with_capacity(h);
        for (i, band) in t.bands.iter().enumerate() {
            let l = new_edge(&mut labels, band.rule_name.clone());
            let r = new_edge(&mut labels, band.rule_name.clone());
            let mut face: Vec<usize> = levels[i].clone();
            face.extend_from_slice(&levels[i + 1]);
            face.extend([l, r]);
            faces.push(face);
            left.push(l);
            right.push(r);
        }
        if mirrored {
            std::mem::swap(&mut left, &mut right);
        }
        left_sides.push(left);
        right_sides.push(right);
    }
    let mut uf = UnionFind((0..labels.len()).collect());
    for copy in 1..k {
        for i in 0..h {
            let (a, b) = (right_sides[copy - 1][i], left_sides[copy][i]);
            if labels[a] != labels[b] {
                return Err(DiagramError::SeamMismatch { copy, band: i });
            }
            uf.union(a, b);
        }
    }
    let mut incidence: HashMap<usize, u32> = HashMap::new();
    for face in &faces {
        for &e in face {
            *incidence.entry(uf.find(e)).or_default() += 1;
        }
    }
    let boundary = loose + incidence.values().filter(|&&n| n == 1).count() as u64;
    Ok(ExplicitComplex {
        faces: faces.len(),
        edges: incidence.len(),
        boundary,
        area: k as u64 * t.area(),
    })
}
