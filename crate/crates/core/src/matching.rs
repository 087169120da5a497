//! Matching objects `M_x K = Nat(∂J^x, K)` and matching maps `K(x) -> M_x K`.

use std::collections::HashMap;

use crate::base::ObjId;
use crate::error::{Error, Result};
use crate::nat::NatSearch;
use crate::presheaf::{Presheaf, PresheafMap};

/// A natural map out of a boundary, as its component tables.
pub type Family = Vec<Vec<usize>>;

#[derive(Clone, Debug)]
pub struct MatchingObject {
    pub object: ObjId,
    pub boundary: Presheaf,
    /// `∂J^x -> J^x`; its components give hom positions of boundary elements.
    pub inclusion: PresheafMap,
    pub families: Vec<Family>,
    index: HashMap<Family, usize>,
    /// `K(x) -> M_x K`.
    pub map: Vec<usize>,
}

impl MatchingObject {
    pub fn compute(k: &Presheaf, x: ObjId) -> Result<MatchingObject> {
        let base = k.base();
        let (boundary, inclusion) = Presheaf::boundary(base, x)?;
        let families = NatSearch::new(&boundary, k)?.all();
        let index: HashMap<Family, usize> = families.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut map = Vec::with_capacity(k.size(x));
        for e in 0..k.size(x) {
            let fam = restrict_element(k, &inclusion, x, e);
            map.push(
                *index
                    .get(&fam)
                    .ok_or_else(|| Error::InvalidPresheaf("boundary of an element is not a matching family".into()))?,
            );
        }
        Ok(MatchingObject { object: x, boundary, inclusion, families, index, map })
    }

    pub fn size(&self) -> usize {
        self.families.len()
    }

    pub fn index_of(&self, family: &Family) -> Option<usize> {
        self.index.get(family).copied()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.families.len()];
        for &m in &self.map {
            hit[m] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Postcomposes a family with `q: K -> K'`.
    pub fn push(&self, q: &PresheafMap, family: &Family) -> Family {
        family.iter().enumerate().map(|(y, row)| row.iter().map(|&e| q.at(y, e)).collect()).collect()
    }
}

/// The family `f ↦ K(f) e` on `∂J^x`.
pub fn restrict_element(k: &Presheaf, inclusion: &PresheafMap, x: ObjId, e: usize) -> Family {
    let base = k.base();
    (0..base.num_objects())
        .map(|y| inclusion.components()[y].iter().map(|&pos| k.act(base.hom(y, x)[pos], e)).collect())
        .collect()
}

/// Reedy fibrancy in the set tribe: every level nonempty and every matching
/// map surjective. Returns the first failing object.
pub fn first_non_fibrant(k: &Presheaf) -> Result<Option<ObjId>> {
    for x in k.base().objects_by_degree() {
        if k.size(x) == 0 || !MatchingObject::compute(k, x)?.is_surjective() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

pub fn is_fibrant(k: &Presheaf) -> Result<bool> {
    Ok(first_non_fibrant(k)?.is_none())
}

/// Relative matching map `F(x) -> F'(x) ×_{M_x F'} M_x F` of `q: F -> F'`.
#[derive(Clone, Debug)]
pub struct RelativeMatching {
    /// Pairs `(e', m)` of the pullback.
    pub pairs: Vec<(usize, usize)>,
    /// Image of each element of `F(x)`.
    pub map: Vec<usize>,
}

impl RelativeMatching {
    pub fn compute(q: &PresheafMap, x: ObjId) -> Result<RelativeMatching> {
        let (f, f2) = (q.source(), q.target());
        let mf = MatchingObject::compute(f, x)?;
        let mf2 = MatchingObject::compute(f2, x)?;
        let mut by_family: HashMap<usize, Vec<usize>> = HashMap::new();
        for (e2, &m2) in mf2.map.iter().enumerate() {
            by_family.entry(m2).or_default().push(e2);
        }
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for (m, fam) in mf.families.iter().enumerate() {
            let pushed = mf.push(q, fam);
            let m2 = mf2.index_of(&pushed).expect("pushed family is natural");
            for &e2 in by_family.get(&m2).map(Vec::as_slice).unwrap_or(&[]) {
                index.insert((e2, m), pairs.len());
                pairs.push((e2, m));
            }
        }
        let map = (0..f.size(x)).map(|e| index[&(q.at(x, e), mf.map[e])]).collect();
        Ok(RelativeMatching { pairs, map })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.pairs.len()];
        for &p in &self.map {
            hit[p] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;

    #[test]
    fn interval_matching_is_pairs_of_vertices() {
        let base = cube_base(HomMode::Plain, 1);
        // F(I^0) = {0,1,2}, F(I^1) = all pairs, faces are the projections.
        let f = Presheaf::from_fn(base.clone(), vec![3, 9], |a, e| match base.arrow(a).label.as_str() {
            "0>1:0" => e / 3,
            "0>1:1" => e % 3,
            _ => e,
        })
        .unwrap();
        let m = MatchingObject::compute(&f, 1).unwrap();
        assert_eq!(m.size(), 9);
        assert!(m.is_surjective());
        let mut seen = m.map.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 9);
        let m0 = MatchingObject::compute(&f, 0).unwrap();
        assert_eq!(m0.size(), 1);
    }
}
