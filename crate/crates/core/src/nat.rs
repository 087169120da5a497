//! Enumeration of natural transformations between finite presheaves.
//!
//! Backtracking over elements in decreasing object degree. Choosing the image
//! of an element `e` at `y` forces the image of `K(f)e` for every `f` into
//! `y`, so most variables are determined by propagation.

use crate::base::ObjId;
use crate::error::Result;
use crate::presheaf::{check_same, Presheaf, PresheafMap};

/// A partial assignment `K -> F` to be completed to natural maps.
pub struct NatSearch<'a> {
    source: &'a Presheaf,
    target: &'a Presheaf,
    order: Vec<(ObjId, usize)>,
    assign: Vec<Vec<usize>>,
    /// Allowed values per variable; `None` means all of `F(x)`.
    allowed: Vec<Vec<Option<Vec<usize>>>>,
}

const UNSET: usize = usize::MAX;

impl<'a> NatSearch<'a> {
    pub fn new(source: &'a Presheaf, target: &'a Presheaf) -> Result<Self> {
        check_same(source, target)?;
        let base = source.base();
        let mut order = Vec::new();
        for x in base.objects_by_degree().into_iter().rev() {
            for e in 0..source.size(x) {
                order.push((x, e));
            }
        }
        let assign = source.sizes().iter().map(|&s| vec![UNSET; s]).collect();
        let allowed = source.sizes().iter().map(|&s| vec![None; s]).collect();
        Ok(NatSearch { source, target, order, assign, allowed })
    }

    /// Pins `e ∈ K(x)` to `v ∈ F(x)`.
    pub fn fix(&mut self, x: ObjId, e: usize, v: usize) -> &mut Self {
        self.allowed[x][e] = Some(vec![v]);
        self
    }

    /// Restricts the image of `e ∈ K(x)` to `values`.
    pub fn restrict(&mut self, x: ObjId, e: usize, values: Vec<usize>) -> &mut Self {
        self.allowed[x][e] = Some(values);
        self
    }

    /// Calls `visit` on each solution in search order until it returns false.
    pub fn for_each(&mut self, mut visit: impl FnMut(&[Vec<usize>]) -> bool) {
        let mut trail = Vec::new();
        self.search(0, &mut trail, &mut visit);
    }

    pub fn count(&mut self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            true
        });
        n
    }

    pub fn first(&mut self) -> Option<Vec<Vec<usize>>> {
        let mut out = None;
        self.for_each(|c| {
            out = Some(c.to_vec());
            false
        });
        out
    }

    pub fn all(&mut self) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.for_each(|c| {
            out.push(c.to_vec());
            true
        });
        out
    }

    fn search(
        &mut self,
        mut pos: usize,
        trail: &mut Vec<(ObjId, usize)>,
        visit: &mut impl FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        while pos < self.order.len() && self.assign[self.order[pos].0][self.order[pos].1] != UNSET {
            pos += 1;
        }
        if pos == self.order.len() {
            return visit(&self.assign);
        }
        let (x, e) = self.order[pos];
        let candidates: Vec<usize> = match &self.allowed[x][e] {
            Some(v) => v.clone(),
            None => (0..self.target.size(x)).collect(),
        };
        for v in candidates {
            let mark = trail.len();
            let ok = self.propagate(x, e, v, trail);
            if ok && !self.search(pos + 1, trail, visit) {
                self.undo(mark, trail);
                return false;
            }
            self.undo(mark, trail);
        }
        true
    }

    fn undo(&mut self, mark: usize, trail: &mut Vec<(ObjId, usize)>) {
        for (x, e) in trail.drain(mark..) {
            self.assign[x][e] = UNSET;
        }
    }

    fn propagate(&mut self, x: ObjId, e: usize, v: usize, trail: &mut Vec<(ObjId, usize)>) -> bool {
        let base = self.source.base().clone();
        let mut stack = vec![(x, e, v)];
        while let Some((y, e, v)) = stack.pop() {
            let current = self.assign[y][e];
            if current != UNSET {
                if current != v {
                    return false;
                }
                continue;
            }
            if let Some(allowed) = &self.allowed[y][e] {
                if !allowed.contains(&v) {
                    return false;
                }
            }
            self.assign[y][e] = v;
            trail.push((y, e));
            for &f in base.incoming(y) {
                if base.is_identity(f) {
                    continue;
                }
                stack.push((base.dom(f), self.source.act(f, e), self.target.act(f, v)));
            }
        }
        true
    }
}

/// Every natural transformation `K -> F`.
pub fn nat_set(source: &Presheaf, target: &Presheaf) -> Result<Vec<PresheafMap>> {
    let solutions = NatSearch::new(source, target)?.all();
    Ok(solutions
        .into_iter()
        .map(|c| PresheafMap::new_unchecked(source.clone(), target.clone(), c))
        .collect())
}

pub fn count_nat(source: &Presheaf, target: &Presheaf) -> Result<usize> {
    Ok(NatSearch::new(source, target)?.count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;

    fn sample(base: &std::sync::Arc<crate::base::BaseCategory>) -> Presheaf {
        // Two vertices, one edge between them, and a loop edge at vertex 0.
        let faces = |f: usize, e: usize| -> usize {
            let lab = &base.arrow(f).label;
            match (lab.as_str(), e) {
                ("0>1:0", 0) => 0,
                ("0>1:1", 0) => 1,
                ("0>1:0", 1) | ("0>1:1", 1) => 0,
                _ => e,
            }
        };
        Presheaf::from_fn(base.clone(), vec![2, 2], faces).unwrap()
    }

    #[test]
    fn yoneda_counts() {
        let base = cube_base(HomMode::Plain, 1);
        let f = sample(&base);
        for x in 0..2 {
            let rep = Presheaf::representable(&base, x).unwrap();
            assert_eq!(count_nat(&rep, &f).unwrap(), f.size(x));
        }
    }

    #[test]
    fn maps_into_terminal() {
        let base = cube_base(HomMode::Plain, 1);
        let f = sample(&base);
        assert_eq!(count_nat(&f, &Presheaf::terminal(base)).unwrap(), 1);
    }

    #[test]
    fn boundary_of_interval_is_two_vertices() {
        let base = cube_base(HomMode::Plain, 1);
        let f = sample(&base);
        let (d, _) = Presheaf::boundary(&base, 1).unwrap();
        let maps = nat_set(&d, &f).unwrap();
        assert_eq!(maps.len(), f.size(0) * f.size(0));
        for m in &maps {
            m.validate().unwrap();
        }
    }
}
