//! Day convolution of presheaves over a (truncated) monoidal base.
//!
//! `(K ⊗ L)(c)` is the set of triples `(a ∈ K_i, b ∈ L_j, u: c -> i ⊗ j)`
//! modulo `(K(f)a, L(g)b, u) ~ (a, b, (f ⊗ g) ∘ u)`.

use serde::Serialize;

use crate::base::{ArrowId, Monoidal, ObjId};
use crate::error::{Error, Result};
use crate::kan::{coend, Coend, CoendArrow, CoendDiagram, Triple};
use crate::presheaf::{check_same, Presheaf, PresheafMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DayWarning {
    /// `i ⊗ j` lies beyond the truncation, so `K_i × L_j` contributes nothing.
    Truncated { left: String, right: String, pairs: usize },
    /// `f ⊗ g` is unavailable, so its relations were not imposed.
    MissingArrowTensor { left: String, right: String },
}

pub struct Day {
    pub presheaf: Presheaf,
    pub warnings: Vec<DayWarning>,
    pairs: Vec<(ObjId, ObjId)>,
    pair_index: std::collections::HashMap<(ObjId, ObjId), usize>,
    right_sizes: Vec<usize>,
    coend: Coend,
}

/// A representative `(i, j, a, b, u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DayTriple {
    pub i: ObjId,
    pub j: ObjId,
    pub a: usize,
    pub b: usize,
    pub u: ArrowId,
}

impl Day {
    pub fn rep(&self, c: ObjId, class: usize) -> DayTriple {
        let t = self.coend.reps[c][class];
        let (i, j) = self.pairs[t.source];
        let w = self.right_sizes[j];
        DayTriple { i, j, a: t.element / w, b: t.element % w, u: t.arrow }
    }

    /// Class of a triple at `c = dom u`.
    pub fn class(&self, t: DayTriple) -> Result<usize> {
        let base = self.presheaf.base();
        let source = *self
            .pair_index
            .get(&(t.i, t.j))
            .ok_or_else(|| Error::Truncation("tensor of the pair lies beyond the truncation".into()))?;
        let element = t.a * self.right_sizes[t.j] + t.b;
        Ok(self.coend.class(base, base.dom(t.u), Triple { source, element, arrow: t.u }))
    }
}

fn monoidal(k: &Presheaf) -> Result<&Monoidal> {
    k.base()
        .monoidal()
        .ok_or_else(|| Error::InvalidCategory(format!("{} has no monoidal structure", k.base().name())))
}

pub fn day_product(k: &Presheaf, l: &Presheaf) -> Result<Day> {
    check_same(k, l)?;
    let base = k.base().clone();
    let m = monoidal(k)?;
    let n = base.num_objects();
    let mut warnings = Vec::new();
    let mut pairs = Vec::new();
    let mut pair_index = std::collections::HashMap::new();
    let mut sources = Vec::new();
    for i in 0..n {
        for j in 0..n {
            match m.objects.get(&(i, j)) {
                Some(&t) => {
                    pair_index.insert((i, j), pairs.len());
                    pairs.push((i, j));
                    sources.push((t, k.size(i) * l.size(j)));
                }
                None if k.size(i) * l.size(j) > 0 => warnings.push(DayWarning::Truncated {
                    left: base.object(i).label.clone(),
                    right: base.object(j).label.clone(),
                    pairs: k.size(i) * l.size(j),
                }),
                None => {}
            }
        }
    }
    let mut arrows = Vec::new();
    for (cod, &(i, j)) in pairs.iter().enumerate() {
        if sources[cod].1 == 0 {
            continue;
        }
        let lj = l.size(j);
        for &f in base.incoming(i) {
            for &g in base.incoming(j) {
                if base.is_identity(f) && base.is_identity(g) {
                    continue;
                }
                let (i2, j2) = (base.dom(f), base.dom(g));
                let Some(&dom) = pair_index.get(&(i2, j2)) else { continue };
                let Some(&image) = m.arrows.get(&(f, g)) else {
                    warnings.push(DayWarning::MissingArrowTensor {
                        left: base.arrow(f).label.clone(),
                        right: base.arrow(g).label.clone(),
                    });
                    continue;
                };
                let lj2 = l.size(j2);
                let act = (0..sources[cod].1)
                    .map(|e| k.act(f, e / lj) * lj2 + l.act(g, e % lj))
                    .collect();
                arrows.push(CoendArrow { dom, cod, image, act });
            }
        }
    }
    let coend = coend(&base, &CoendDiagram { sources, arrows })?;
    Ok(Day {
        presheaf: coend.presheaf.clone(),
        warnings,
        pairs,
        pair_index,
        right_sizes: l.sizes().to_vec(),
        coend,
    })
}

/// `α ⊗ β` on Day products.
pub fn day_map(alpha: &PresheafMap, beta: &PresheafMap) -> Result<PresheafMap> {
    let src = day_product(alpha.source(), beta.source())?;
    let tgt = day_product(alpha.target(), beta.target())?;
    let n = src.presheaf.base().num_objects();
    let mut components = Vec::with_capacity(n);
    for c in 0..n {
        let mut comp = Vec::with_capacity(src.presheaf.size(c));
        for class in 0..src.presheaf.size(c) {
            let t = src.rep(c, class);
            comp.push(tgt.class(DayTriple { a: alpha.at(t.i, t.a), b: beta.at(t.j, t.b), ..t })?);
        }
        components.push(comp);
    }
    PresheafMap::new(src.presheaf, tgt.presheaf, components)
}

/// `J^x ⊗ J^y -> J^{x ⊗ y}`, `(f, g, u) ↦ (f ⊗ g) ∘ u`.
pub fn representables_comparison(base: &std::sync::Arc<crate::base::BaseCategory>, x: ObjId, y: ObjId) -> Result<PresheafMap> {
    let jx = Presheaf::representable(base, x)?;
    let jy = Presheaf::representable(base, y)?;
    let m = monoidal(&jx)?;
    let xy = *m
        .objects
        .get(&(x, y))
        .ok_or_else(|| Error::Truncation(format!("{} ⊗ {}", base.object(x).label, base.object(y).label)))?;
    let jxy = Presheaf::representable(base, xy)?;
    let day = day_product(&jx, &jy)?;
    let mut components = Vec::with_capacity(base.num_objects());
    for c in 0..base.num_objects() {
        let mut comp = Vec::with_capacity(day.presheaf.size(c));
        for class in 0..day.presheaf.size(c) {
            let t = day.rep(c, class);
            let f = base.hom(t.i, x)[t.a];
            let g = base.hom(t.j, y)[t.b];
            let fg = *m
                .arrows
                .get(&(f, g))
                .ok_or_else(|| Error::Truncation("arrow tensor unavailable".into()))?;
            comp.push(base.hom_position(base.compose(fg, t.u)));
        }
        components.push(comp);
    }
    PresheafMap::new(day.presheaf, jxy, components)
}

/// Left unitor `J^I ⊗ K -> K`, `(a, b, u) ↦ K((a ⊗ id) ∘ u) b`.
pub fn left_unitor(k: &Presheaf) -> Result<PresheafMap> {
    let base = k.base();
    let m = monoidal(k)?;
    let unit = Presheaf::representable(base, m.unit)?;
    let day = day_product(&unit, k)?;
    let mut components = Vec::with_capacity(base.num_objects());
    for c in 0..base.num_objects() {
        let mut comp = Vec::with_capacity(day.presheaf.size(c));
        for class in 0..day.presheaf.size(c) {
            let t = day.rep(c, class);
            let a = base.hom(t.i, m.unit)[t.a];
            let ida = *m
                .arrows
                .get(&(a, base.identity(t.j)))
                .ok_or_else(|| Error::Truncation("arrow tensor unavailable".into()))?;
            comp.push(k.act(base.compose(ida, t.u), t.b));
        }
        components.push(comp);
    }
    PresheafMap::new(day.presheaf, k.clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;

    #[test]
    fn square_from_two_intervals() {
        let base = cube_base(HomMode::Plain, 2);
        let j1 = Presheaf::representable(&base, 1).unwrap();
        let day = day_product(&j1, &j1).unwrap();
        assert_eq!(day.presheaf.size(0), 4);
        assert!(day.warnings.is_empty());
        assert!(representables_comparison(&base, 1, 1).unwrap().is_iso());
    }

    #[test]
    fn unit_law() {
        for mode in [HomMode::Plain, HomMode::Symmetric] {
            let base = cube_base(mode, 2);
            let (k, _) = Presheaf::boundary(&base, 2).unwrap();
            assert!(left_unitor(&k).unwrap().is_iso());
        }
    }

    #[test]
    fn truncation_is_reported() {
        let base = cube_base(HomMode::Plain, 2);
        let j2 = Presheaf::representable(&base, 2).unwrap();
        let j1 = Presheaf::representable(&base, 1).unwrap();
        let day = day_product(&j2, &j1).unwrap();
        assert!(day.warnings.iter().any(|w| matches!(w, DayWarning::Truncated { .. })));
    }
}
