//! Skeletal filtrations and relative cell decompositions over direct bases.
//!
//! A mono `i: K -> L` is presented as `K = X_0 -> X_1 -> ... -> X_s ≅ L`, where
//! each step is the pushout of `⨿ ∂J^x -> ⨿ J^x` along an attaching map into
//! the previous stage. Cells of a stage are the elements of `L` outside the
//! image, at objects of the stage's degree.

use std::sync::Arc;

use serde::Serialize;

use crate::base::{BaseCategory, Degree, ObjId, Strictness};
use crate::error::{Error, Result};
use crate::presheaf::{Presheaf, PresheafMap};

/// A cell `J^x -> L`, named by its Yoneda element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub object: ObjId,
    pub element: usize,
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub degree: Degree,
    pub cells: Vec<Cell>,
    /// `⨿ ∂J^x -> X_{prev}`.
    pub attaching: PresheafMap,
    /// `⨿ ∂J^x -> ⨿ J^x`.
    pub boundary_inclusion: PresheafMap,
    /// `X_{prev} -> X_next`, the pushout of the boundary inclusion.
    pub inclusion: PresheafMap,
    /// `⨿ J^x -> X_next`.
    pub characteristic: PresheafMap,
}

#[derive(Clone, Debug)]
pub struct CellDecomposition {
    pub start: Presheaf,
    pub stages: Vec<Stage>,
    /// `X_s -> L`, an isomorphism.
    pub reconstruction: PresheafMap,
}

impl CellDecomposition {
    pub fn cells_at(&self, degree: &Degree) -> usize {
        self.stages.iter().filter(|s| &s.degree == degree).map(|s| s.cells.len()).sum()
    }

    pub fn num_cells(&self) -> usize {
        self.stages.iter().map(|s| s.cells.len()).sum()
    }

    /// Composite `X_0 -> X_s` of the stage inclusions.
    pub fn composite(&self) -> Result<PresheafMap> {
        let mut acc = PresheafMap::identity(&self.start);
        for s in &self.stages {
            acc = s.inclusion.after(&acc)?;
        }
        Ok(acc)
    }

    /// Recomputes every pushout and checks that the composite of the stages
    /// agrees with the decomposed mono.
    pub fn verify(&self, i: &PresheafMap) -> Result<()> {
        for s in &self.stages {
            let po = Presheaf::pushout(&s.boundary_inclusion, &s.attaching)?;
            if po.object != *s.inclusion.target() || po.inr != s.inclusion || po.inl != s.characteristic {
                return Err(Error::InvalidPresheaf("stage is not the recorded pushout".into()));
            }
        }
        if !self.reconstruction.is_iso() {
            return Err(Error::InvalidPresheaf("reconstruction is not an isomorphism".into()));
        }
        let total = self.reconstruction.after(&self.composite()?)?;
        if total.components() != i.components() {
            return Err(Error::InvalidPresheaf("recomposed map differs from the input".into()));
        }
        Ok(())
    }
}

fn require_direct(base: &BaseCategory) -> Result<()> {
    if base.strictness() == Strictness::Direct {
        Ok(())
    } else {
        Err(Error::NotDirect(base.name().to_string()))
    }
}

/// The skeletal filtration of `K`, as the cell decomposition of `∅ -> K`.
pub fn skeletal_filtration(k: &Presheaf) -> Result<CellDecomposition> {
    let empty = Presheaf::empty(k.base().clone());
    let i = PresheafMap::new(empty, k.clone(), vec![Vec::new(); k.base().num_objects()])?;
    cell_decompose_mono(&i)
}

/// Presents a mono as a composite of pushouts of boundary inclusions.
/// Stages run over every distinct object degree in increasing order; stages
/// without cells are kept so that `S_n` is recorded for every `n`.
pub fn cell_decompose_mono(i: &PresheafMap) -> Result<CellDecomposition> {
    let base: Arc<BaseCategory> = i.source().base().clone();
    require_direct(&base)?;
    if !i.is_mono() {
        return Err(Error::NotMono("cannot decompose a non-injective map".into()));
    }
    let l = i.target();
    let n = base.num_objects();
    let mut degrees: Vec<Degree> = base.objects().iter().map(|o| o.degree.clone()).collect();
    degrees.sort();
    degrees.dedup();

    let mut current = i.source().clone();
    // preimage[x][e] = element of `current` mapping to `e ∈ L(x)`.
    let mut to_l = i.clone();
    let mut stages = Vec::new();
    for degree in degrees {
        let mut preimage: Vec<Vec<Option<usize>>> = (0..n).map(|x| vec![None; l.size(x)]).collect();
        for x in 0..n {
            for (a, &e) in to_l.components()[x].iter().enumerate() {
                preimage[x][e] = Some(a);
            }
        }
        let mut cells = Vec::new();
        for x in base.objects_by_degree() {
            if base.degree(x) != &degree {
                continue;
            }
            for e in 0..l.size(x) {
                if preimage[x][e].is_none() {
                    cells.push(Cell { object: x, element: e });
                }
            }
        }
        let mut boundaries = Vec::with_capacity(cells.len());
        let mut discs = Vec::with_capacity(cells.len());
        let mut inclusions = Vec::with_capacity(cells.len());
        for c in &cells {
            let (d, inc) = Presheaf::boundary(&base, c.object)?;
            boundaries.push(d);
            discs.push(inc.target().clone());
            inclusions.push(inc);
        }
        let (sum_d, _) = Presheaf::coproduct(&base, &boundaries)?;
        let (sum_j, inj_j) = Presheaf::coproduct(&base, &discs)?;
        // ⨿∂ -> ⨿J is the sum of the boundary inclusions.
        let mut bi = vec![Vec::new(); n];
        let mut att = vec![Vec::new(); n];
        for (ci, c) in cells.iter().enumerate() {
            for y in 0..n {
                for &arrow_pos in &inclusions[ci].components()[y] {
                    bi[y].push(inj_j[ci].at(y, arrow_pos));
                    let arrow = base.hom(y, c.object)[arrow_pos];
                    let target = l.act(arrow, c.element);
                    let pre = preimage[y][target].ok_or_else(|| {
                        Error::NotDirect("boundary of a cell is not yet attached".to_string())
                    })?;
                    att[y].push(pre);
                }
            }
        }
        let boundary_inclusion = PresheafMap::new(sum_d.clone(), sum_j.clone(), bi)?;
        let attaching = PresheafMap::new(sum_d, current.clone(), att)?;
        let po = Presheaf::pushout(&boundary_inclusion, &attaching)?;
        // Induced map X_next -> L.
        let next = po.object.clone();
        let mut comp: Vec<Vec<usize>> = (0..n).map(|y| vec![usize::MAX; next.size(y)]).collect();
        for y in 0..n {
            for (a, &p) in po.inr.components()[y].iter().enumerate() {
                comp[y][p] = to_l.at(y, a);
            }
            for (ci, c) in cells.iter().enumerate() {
                for (pos, &arrow) in base.hom(y, c.object).iter().enumerate() {
                    let p = po.inl.at(y, inj_j[ci].at(y, pos));
                    comp[y][p] = l.act(arrow, c.element);
                }
            }
        }
        let new_to_l = PresheafMap::new(next.clone(), l.clone(), comp)?;
        if !new_to_l.is_mono() {
            return Err(Error::NotMono("attached cells collide".into()));
        }
        stages.push(Stage {
            degree,
            cells,
            attaching,
            boundary_inclusion,
            inclusion: po.inr,
            characteristic: po.inl,
        });
        current = next;
        to_l = new_to_l;
    }
    if !to_l.is_iso() {
        return Err(Error::InvalidPresheaf("cells do not exhaust the target".into()));
    }
    Ok(CellDecomposition { start: i.source().clone(), stages, reconstruction: to_l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;

    #[test]
    fn boundary_of_square_cells() {
        let base = cube_base(HomMode::Plain, 2);
        let (d, _) = Presheaf::boundary(&base, 2).unwrap();
        let dec = skeletal_filtration(&d).unwrap();
        assert_eq!(dec.cells_at(&Degree(vec![0])), 4);
        assert_eq!(dec.cells_at(&Degree(vec![1])), 4);
        assert_eq!(dec.cells_at(&Degree(vec![2])), 0);
        let i = PresheafMap::new(Presheaf::empty(base.clone()), d, vec![Vec::new(); 3]).unwrap();
        dec.verify(&i).unwrap();
    }

    #[test]
    fn boundary_inclusion_is_one_cell() {
        let base = cube_base(HomMode::Plain, 3);
        let (_, inc) = Presheaf::boundary(&base, 3).unwrap();
        let dec = cell_decompose_mono(&inc).unwrap();
        assert_eq!(dec.num_cells(), 1);
        assert_eq!(dec.cells_at(&Degree(vec![3])), 1);
        dec.verify(&inc).unwrap();
    }

    #[test]
    fn identity_has_no_cells() {
        let base = cube_base(HomMode::Plain, 2);
        let j = Presheaf::representable(&base, 2).unwrap();
        let dec = cell_decompose_mono(&PresheafMap::identity(&j)).unwrap();
        assert_eq!(dec.num_cells(), 0);
    }

    #[test]
    fn symmetric_base_is_rejected() {
        let base = cube_base(HomMode::Symmetric, 1);
        let j = Presheaf::representable(&base, 1).unwrap();
        assert!(matches!(skeletal_filtration(&j), Err(Error::NotDirect(_))));
    }
}
