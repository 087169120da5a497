//! Finite presheaves over a [`BaseCategory`] and natural maps between them.
//!
//! Elements at each object are the integers `0..size`. An arrow `f: x -> y`
//! acts contravariantly, `action[f]` sending elements at `y` to elements at `x`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{same_base, ArrowId, BaseCategory, Functor, ObjId};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Presheaf {
    base: Arc<BaseCategory>,
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.sizes == other.sizes && self.action == other.action
    }
}

impl Eq for Presheaf {}

impl Presheaf {
    /// Builds and validates a presheaf from explicit action tables.
    pub fn new(base: Arc<BaseCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Presheaf> {
        let k = Presheaf { base, sizes, action };
        k.validate()?;
        Ok(k)
    }

    pub fn from_fn(
        base: Arc<BaseCategory>,
        sizes: Vec<usize>,
        mut act: impl FnMut(ArrowId, usize) -> usize,
    ) -> Result<Presheaf> {
        if sizes.len() != base.num_objects() {
            return Err(Error::Shape(format!(
                "{} levels given for {} objects",
                sizes.len(),
                base.num_objects()
            )));
        }
        let action = (0..base.num_arrows())
            .map(|a| (0..sizes[base.cod(a)]).map(|e| act(a, e)).collect())
            .collect();
        Presheaf::new(base, sizes, action)
    }

    pub(crate) fn new_unchecked(base: Arc<BaseCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Presheaf {
        Presheaf { base, sizes, action }
    }

    /// Contravariant functoriality on every composable pair.
    pub fn validate(&self) -> Result<()> {
        let b = &self.base;
        if self.sizes.len() != b.num_objects() || self.action.len() != b.num_arrows() {
            return Err(Error::Shape("presheaf tables do not match the base".into()));
        }
        for a in 0..b.num_arrows() {
            let (x, y) = (b.dom(a), b.cod(a));
            if self.action[a].len() != self.sizes[y] || self.action[a].iter().any(|&e| e >= self.sizes[x]) {
                return Err(Error::InvalidPresheaf(format!("action of `{}` has the wrong shape", b.arrow(a).label)));
            }
        }
        for x in 0..b.num_objects() {
            let id = b.identity(x);
            if self.action[id].iter().enumerate().any(|(e, &v)| e != v) {
                return Err(Error::InvalidPresheaf(format!("identity of `{}` acts nontrivially", b.object(x).label)));
            }
        }
        for f in 0..b.num_arrows() {
            for &g in b.outgoing(b.cod(f)) {
                let gf = b.compose(g, f);
                for e in 0..self.sizes[b.cod(g)] {
                    if self.action[gf][e] != self.action[f][self.action[g][e]] {
                        return Err(Error::InvalidPresheaf(format!(
                            "action of `{}` ∘ `{}` is not the composite action",
                            b.arrow(g).label,
                            b.arrow(f).label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.base
    }

    pub fn size(&self, x: ObjId) -> usize {
        self.sizes[x]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `K(f)(e)` for `f: x -> y`, `e` at `y`.
    pub fn act(&self, f: ArrowId, e: usize) -> usize {
        self.action[f][e]
    }

    pub fn action(&self, f: ArrowId) -> &[usize] {
        &self.action[f]
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.iter().all(|&s| s == 0)
    }

    pub fn empty(base: Arc<BaseCategory>) -> Presheaf {
        let sizes = vec![0; base.num_objects()];
        let action = vec![Vec::new(); base.num_arrows()];
        Presheaf { base, sizes, action }
    }

    /// Constant presheaf on `n` elements.
    pub fn constant(base: Arc<BaseCategory>, n: usize) -> Presheaf {
        let sizes = vec![n; base.num_objects()];
        let action = vec![(0..n).collect(); base.num_arrows()];
        Presheaf { base, sizes, action }
    }

    pub fn terminal(base: Arc<BaseCategory>) -> Presheaf {
        Presheaf::constant(base, 1)
    }

    /// `J^x`: elements at `y` are `hom(y, x)` in hom-list order.
    pub fn representable(base: &Arc<BaseCategory>, x: ObjId) -> Result<Presheaf> {
        if x >= base.num_objects() {
            return Err(Error::UnknownObject(format!("#{x}")));
        }
        let sizes = (0..base.num_objects()).map(|y| base.hom(y, x).len()).collect();
        let action = (0..base.num_arrows())
            .map(|f| {
                base.hom(base.cod(f), x)
                    .iter()
                    .map(|&g| base.hom_position(base.compose(g, f)))
                    .collect()
            })
            .collect();
        Ok(Presheaf { base: base.clone(), sizes, action })
    }

    /// `∂J^x`: arrows into `x` factoring through an object of strictly smaller
    /// degree. Since arrows never lower degree, these are exactly the arrows
    /// whose domain has smaller degree.
    pub fn boundary(base: &Arc<BaseCategory>, x: ObjId) -> Result<(Presheaf, PresheafMap)> {
        let rep = Presheaf::representable(base, x)?;
        let dx = base.degree(x).clone();
        let keep: Vec<Vec<bool>> = (0..base.num_objects())
            .map(|y| vec![base.degree(y) < &dx; rep.size(y)])
            .collect();
        rep.subpresheaf(&keep)
    }

    /// The subpresheaf on the marked elements, with its inclusion.
    pub fn subpresheaf(&self, keep: &[Vec<bool>]) -> Result<(Presheaf, PresheafMap)> {
        let b = &self.base;
        let mut index = Vec::with_capacity(b.num_objects());
        let mut components = Vec::with_capacity(b.num_objects());
        for x in 0..b.num_objects() {
            let mut idx = vec![usize::MAX; self.sizes[x]];
            let mut comp = Vec::new();
            for e in 0..self.sizes[x] {
                if keep[x][e] {
                    idx[e] = comp.len();
                    comp.push(e);
                }
            }
            index.push(idx);
            components.push(comp);
        }
        let mut action = Vec::with_capacity(b.num_arrows());
        for f in 0..b.num_arrows() {
            let x = b.dom(f);
            let mut row = Vec::with_capacity(components[b.cod(f)].len());
            for &e in &components[b.cod(f)] {
                let i = index[x][self.action[f][e]];
                if i == usize::MAX {
                    return Err(Error::InvalidPresheaf(format!(
                        "marked elements are not closed under `{}`",
                        b.arrow(f).label
                    )));
                }
                row.push(i);
            }
            action.push(row);
        }
        let sizes = components.iter().map(Vec::len).collect();
        let sub = Presheaf { base: b.clone(), sizes, action };
        let inc = PresheafMap { source: sub.clone(), target: self.clone(), components };
        Ok((sub, inc))
    }

    /// Closure of the given elements under the action.
    pub fn generated(&self, gens: &[(ObjId, usize)]) -> Vec<Vec<bool>> {
        let mut keep: Vec<Vec<bool>> = self.sizes.iter().map(|&s| vec![false; s]).collect();
        for &(y, e) in gens {
            for &f in self.base.incoming(y) {
                keep[self.base.dom(f)][self.action[f][e]] = true;
            }
        }
        keep
    }

    /// `p^*K = K ∘ p`.
    pub fn restrict(&self, p: &Functor) -> Result<Presheaf> {
        if !same_base(&p.target, &self.base) {
            return Err(Error::BaseMismatch("restriction along a functor with another target".into()));
        }
        let sizes = (0..p.source.num_objects()).map(|d| self.sizes[p.obj(d)]).collect();
        let action = (0..p.source.num_arrows()).map(|h| self.action[p.arrow(h)].clone()).collect();
        Ok(Presheaf { base: p.source.clone(), sizes, action })
    }

    /// Binary product, elements `(a, b)` encoded as `a * |L_x| + b`.
    pub fn product(&self, other: &Presheaf) -> Result<Presheaf> {
        check_same(self, other)?;
        let sizes: Vec<usize> = self.sizes.iter().zip(&other.sizes).map(|(a, b)| a * b).collect();
        let action = (0..self.base.num_arrows())
            .map(|f| {
                let (x, y) = (self.base.dom(f), self.base.cod(f));
                (0..sizes[y])
                    .map(|e| {
                        let (a, b) = (e / other.sizes[y], e % other.sizes[y]);
                        self.action[f][a] * other.sizes[x] + other.action[f][b]
                    })
                    .collect()
            })
            .collect();
        Ok(Presheaf { base: self.base.clone(), sizes, action })
    }

    /// Coproduct of a list, with the injections. Elements of summand `i`
    /// follow those of summands `< i`.
    pub fn coproduct(base: &Arc<BaseCategory>, parts: &[Presheaf]) -> Result<(Presheaf, Vec<PresheafMap>)> {
        for p in parts {
            if !same_base(base, &p.base) {
                return Err(Error::BaseMismatch("coproduct summands over different bases".into()));
            }
        }
        let n = base.num_objects();
        let mut offsets = vec![vec![0; n]; parts.len()];
        let mut sizes = vec![0; n];
        for (i, p) in parts.iter().enumerate() {
            for x in 0..n {
                offsets[i][x] = sizes[x];
                sizes[x] += p.sizes[x];
            }
        }
        let action = (0..base.num_arrows())
            .map(|f| {
                let x = base.dom(f);
                let mut row = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    row.extend(p.action[f].iter().map(|&e| e + offsets[i][x]));
                }
                row
            })
            .collect();
        let sum = Presheaf { base: base.clone(), sizes, action };
        let injections = parts
            .iter()
            .enumerate()
            .map(|(i, p)| PresheafMap {
                source: p.clone(),
                target: sum.clone(),
                components: (0..n).map(|x| (0..p.sizes[x]).map(|e| e + offsets[i][x]).collect()).collect(),
            })
            .collect();
        Ok((sum, injections))
    }

    /// Pushout of `B <- A -> C`, computed levelwise as `B ⊔ C` modulo the
    /// images of `A`. Classes are numbered by their smallest member, with
    /// `B` before `C`.
    pub fn pushout(f: &PresheafMap, g: &PresheafMap) -> Result<Pushout> {
        if f.source != g.source {
            return Err(Error::BaseMismatch("pushout legs have different sources".into()));
        }
        let base = f.source.base.clone();
        let (bp, cp) = (&f.target, &g.target);
        check_same(bp, cp)?;
        let n = base.num_objects();
        let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut sizes = Vec::with_capacity(n);
        for x in 0..n {
            let nb = bp.sizes[x];
            let mut uf = UnionFind::new(nb + cp.sizes[x]);
            for a in 0..f.source.sizes[x] {
                uf.union(f.components[x][a], nb + g.components[x][a]);
            }
            let (classes, count) = uf.classes();
            class_of.push(classes);
            sizes.push(count);
        }
        let mut action = Vec::with_capacity(base.num_arrows());
        for h in 0..base.num_arrows() {
            let (x, y) = (base.dom(h), base.cod(h));
            let (nbx, nby) = (bp.sizes[x], bp.sizes[y]);
            let mut row = vec![usize::MAX; sizes[y]];
            for e in 0..nby + cp.sizes[y] {
                let img = if e < nby { bp.action[h][e] } else { nbx + cp.action[h][e - nby] };
                let (c, d) = (class_of[y][e], class_of[x][img]);
                if row[c] == usize::MAX {
                    row[c] = d;
                } else if row[c] != d {
                    return Err(Error::InvalidPresheaf("pushout action is not well defined".into()));
                }
            }
            action.push(row);
        }
        let object = Presheaf::new(base, sizes, action)?;
        let inl = PresheafMap {
            source: bp.clone(),
            target: object.clone(),
            components: (0..n).map(|x| class_of[x][..bp.sizes[x]].to_vec()).collect(),
        };
        let inr = PresheafMap {
            source: cp.clone(),
            target: object.clone(),
            components: (0..n).map(|x| class_of[x][bp.sizes[x]..].to_vec()).collect(),
        };
        Ok(Pushout { object, inl, inr })
    }

    pub fn to_json(&self) -> PresheafJson {
        let b = &self.base;
        let mut levels = BTreeMap::new();
        for x in 0..b.num_objects() {
            levels.insert(b.object(x).label.clone(), (0..self.sizes[x]).collect());
        }
        let mut action = BTreeMap::new();
        for f in 0..b.num_arrows() {
            if b.is_identity(f) {
                continue;
            }
            action.insert(b.arrow(f).label.clone(), self.action[f].iter().copied().enumerate().collect());
        }
        PresheafJson { base: b.kind().name().to_string(), maxdeg: b.max_deg(), levels, action }
    }

    /// Reads the JSON form over an already-built base. Element ids may be any
    /// integers; they are renumbered in listed order. Identity arrows may be
    /// omitted, every other arrow must be given.
    pub fn from_json(base: &Arc<BaseCategory>, json: &PresheafJson) -> Result<Presheaf> {
        if json.base != base.kind().name() || json.maxdeg != base.max_deg() {
            return Err(Error::BaseMismatch(format!(
                "file is over {}<={}, expected {}",
                json.base,
                json.maxdeg,
                base.name()
            )));
        }
        let n = base.num_objects();
        let mut ids: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
        let mut sizes = vec![0; n];
        for (label, elems) in &json.levels {
            let x = base.object_by_label(label)?;
            for (i, &e) in elems.iter().enumerate() {
                if ids[x].insert(e, i).is_some() {
                    return Err(Error::Parse(format!("duplicate element {e} at `{label}`")));
                }
            }
            sizes[x] = elems.len();
        }
        let mut action: Vec<Option<Vec<usize>>> = vec![None; base.num_arrows()];
        for (label, pairs) in &json.action {
            let f = base.arrow_by_label(label)?;
            let (x, y) = (base.dom(f), base.cod(f));
            let mut row = vec![usize::MAX; sizes[y]];
            for &(from, to) in pairs {
                let i = *ids[y].get(&from).ok_or_else(|| Error::Parse(format!("`{label}`: unknown element {from}")))?;
                let j = *ids[x].get(&to).ok_or_else(|| Error::Parse(format!("`{label}`: unknown element {to}")))?;
                row[i] = j;
            }
            if row.contains(&usize::MAX) {
                return Err(Error::Parse(format!("`{label}`: action is not total")));
            }
            action[f] = Some(row);
        }
        let mut full = Vec::with_capacity(base.num_arrows());
        for (f, row) in action.into_iter().enumerate() {
            match row {
                Some(r) => full.push(r),
                None if base.is_identity(f) => full.push((0..sizes[base.dom(f)]).collect()),
                None => return Err(Error::Parse(format!("missing action of `{}`", base.arrow(f).label))),
            }
        }
        Presheaf::new(base.clone(), sizes, full)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresheafJson {
    pub base: String,
    pub maxdeg: usize,
    pub levels: BTreeMap<String, Vec<usize>>,
    pub action: BTreeMap<String, Vec<(usize, usize)>>,
}

#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Presheaf,
    pub inl: PresheafMap,
    pub inr: PresheafMap,
}

pub(crate) fn check_same(a: &Presheaf, b: &Presheaf) -> Result<()> {
    if same_base(&a.base, &b.base) {
        Ok(())
    } else {
        Err(Error::BaseMismatch(format!("{} vs {}", a.base.name(), b.base.name())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMap {
    source: Presheaf,
    target: Presheaf,
    components: Vec<Vec<usize>>,
}

impl PresheafMap {
    pub fn new(source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> Result<PresheafMap> {
        check_same(&source, &target)?;
        let m = PresheafMap { source, target, components };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> PresheafMap {
        PresheafMap { source, target, components }
    }

    pub fn validate(&self) -> Result<()> {
        let b = self.source.base();
        if self.components.len() != b.num_objects() {
            return Err(Error::Shape("wrong number of components".into()));
        }
        for x in 0..b.num_objects() {
            if self.components[x].len() != self.source.size(x)
                || self.components[x].iter().any(|&e| e >= self.target.size(x))
            {
                return Err(Error::Shape(format!("component at `{}` has the wrong shape", b.object(x).label)));
            }
        }
        for f in 0..b.num_arrows() {
            let (x, y) = (b.dom(f), b.cod(f));
            for e in 0..self.source.size(y) {
                if self.components[x][self.source.act(f, e)] != self.target.act(f, self.components[y][e]) {
                    return Err(Error::InvalidPresheaf(format!("naturality fails at `{}`", b.arrow(f).label)));
                }
            }
        }
        Ok(())
    }

    pub fn identity(k: &Presheaf) -> PresheafMap {
        PresheafMap {
            source: k.clone(),
            target: k.clone(),
            components: k.sizes.iter().map(|&s| (0..s).collect()).collect(),
        }
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn at(&self, x: ObjId, e: usize) -> usize {
        self.components[x][e]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &PresheafMap) -> Result<PresheafMap> {
        if first.target != self.source {
            return Err(Error::BaseMismatch("maps are not composable".into()));
        }
        let components = first
            .components
            .iter()
            .zip(&self.components)
            .map(|(f, g)| f.iter().map(|&e| g[e]).collect())
            .collect();
        Ok(PresheafMap { source: first.source.clone(), target: self.target.clone(), components })
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().enumerate().all(|(x, c)| {
            let mut seen = vec![false; self.target.size(x)];
            c.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
        })
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().enumerate().all(|(x, c)| {
            let mut seen = vec![false; self.target.size(x)];
            for &e in c {
                seen[e] = true;
            }
            seen.into_iter().all(|s| s)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    pub fn inverse(&self) -> Result<PresheafMap> {
        if !self.is_iso() {
            return Err(Error::NotMono("map is not invertible".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut inv = vec![0; c.len()];
                for (e, &v) in c.iter().enumerate() {
                    inv[v] = e;
                }
                inv
            })
            .collect();
        Ok(PresheafMap { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Image as a set of marked target elements.
    pub fn image(&self) -> Vec<Vec<bool>> {
        let mut keep: Vec<Vec<bool>> = self.target.sizes.iter().map(|&s| vec![false; s]).collect();
        for (x, c) in self.components.iter().enumerate() {
            for &e in c {
                keep[x][e] = true;
            }
        }
        keep
    }

    pub fn restrict(&self, p: &Functor) -> Result<PresheafMap> {
        let components = (0..p.source.num_objects()).map(|d| self.components[p.obj(d)].clone()).collect();
        Ok(PresheafMap { source: self.source.restrict(p)?, target: self.target.restrict(p)?, components })
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Dense class numbers ordered by smallest member, and the class count.
    pub(crate) fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut number = vec![usize::MAX; n];
        let mut out = Vec::with_capacity(n);
        let mut count = 0;
        for a in 0..n {
            let r = self.find(a);
            if number[r] == usize::MAX {
                number[r] = count;
                count += 1;
            }
            out.push(number[r]);
        }
        (out, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;

    #[test]
    fn representables_validate() {
        for mode in [HomMode::Plain, HomMode::Symmetric] {
            let base = cube_base(mode, 3);
            for x in 0..4 {
                Presheaf::representable(&base, x).unwrap().validate().unwrap();
            }
        }
    }

    #[test]
    fn boundary_of_square() {
        let base = cube_base(HomMode::Plain, 2);
        let (d, inc) = Presheaf::boundary(&base, 2).unwrap();
        assert_eq!(d.sizes(), &[4, 4, 0]);
        assert!(inc.is_mono());
    }

    #[test]
    fn symmetric_boundary_of_interval() {
        let base = cube_base(HomMode::Symmetric, 1);
        let (d, _) = Presheaf::boundary(&base, 1).unwrap();
        assert_eq!(d.sizes(), &[2, 0]);
    }

    #[test]
    fn pushout_glues_two_intervals() {
        let base = cube_base(HomMode::Plain, 1);
        let j1 = Presheaf::representable(&base, 1).unwrap();
        let j0 = Presheaf::representable(&base, 0).unwrap();
        // The vertex δ₁ of the first interval glued to δ₀ of the second.
        let f = PresheafMap::new(j0.clone(), j1.clone(), vec![vec![1], vec![]]).unwrap();
        let g = PresheafMap::new(j0, j1, vec![vec![0], vec![]]).unwrap();
        let po = Presheaf::pushout(&f, &g).unwrap();
        assert_eq!(po.object.sizes(), &[3, 2]);
    }

    #[test]
    fn json_round_trip() {
        let base = cube_base(HomMode::Symmetric, 2);
        let k = Presheaf::representable(&base, 1).unwrap();
        let text = serde_json::to_string(&k.to_json()).unwrap();
        let back: PresheafJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Presheaf::from_json(&base, &back).unwrap(), k);
    }
}
