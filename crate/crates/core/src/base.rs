//! Finite presented categories with a degree function.
//!
//! Everything the presheaf engine needs is held in explicit tables: objects
//! with their degrees, arrows with domain and codomain, hom-lists and a total
//! composition table. Concrete categories (semi-cubes, the augmented
//! semi-simplex category, `D_R`) are built into this form by their own modules.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cube::{compose_cube, enumerate_hom, tensor_cube, CubeMor, HomMode};
use crate::error::{Error, Result};
use crate::simplex::SimplexMor;

pub type ObjId = usize;
pub type ArrowId = usize;

/// Lexicographically ordered degree. Cubes use `[n]`, `D_R` uses a triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Degree(pub Vec<u32>);

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strictness {
    /// Every nonidentity arrow strictly raises degree.
    Direct,
    /// Arrows weakly raise degree and degree-preserving arrows are invertible.
    Ez,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    CubePlain,
    CubeSym,
    Simplex,
    Dr,
    Custom,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            BaseKind::CubePlain => "cube-plain",
            BaseKind::CubeSym => "cube-sym",
            BaseKind::Simplex => "simplex",
            BaseKind::Dr => "dr",
            BaseKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<BaseKind> {
        Ok(match s {
            "cube-plain" => BaseKind::CubePlain,
            "cube-sym" => BaseKind::CubeSym,
            "simplex" => BaseKind::Simplex,
            "dr" => BaseKind::Dr,
            other => return Err(Error::Parse(format!("unknown base `{other}`"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Object {
    pub label: String,
    pub degree: Degree,
    /// Truncation level: cube dimension, or codomain dimension for `D_R`.
    pub level: usize,
}

#[derive(Clone, Debug)]
pub struct Arrow {
    pub dom: ObjId,
    pub cod: ObjId,
    pub label: String,
}

/// Monoidal product restricted to the truncation. Missing arrow entries mean
/// the product of those arrows is not available.
#[derive(Clone, Debug, Default)]
pub struct Monoidal {
    pub unit: ObjId,
    pub objects: HashMap<(ObjId, ObjId), ObjId>,
    pub arrows: HashMap<(ArrowId, ArrowId), ArrowId>,
}

#[derive(Debug)]
pub struct BaseCategory {
    name: String,
    kind: BaseKind,
    max_deg: usize,
    strictness: Strictness,
    objects: Vec<Object>,
    arrows: Vec<Arrow>,
    hom: HashMap<(ObjId, ObjId), Vec<ArrowId>>,
    incoming: Vec<Vec<ArrowId>>,
    outgoing: Vec<Vec<ArrowId>>,
    hom_pos: Vec<usize>,
    out_pos: Vec<usize>,
    identities: Vec<ArrowId>,
    /// `compose[f][out_pos[g]] = g ∘ f`.
    compose: Vec<Vec<ArrowId>>,
    obj_by_label: HashMap<String, ObjId>,
    arrow_by_label: HashMap<String, ArrowId>,
    monoidal: Option<Monoidal>,
}

static EMPTY: Vec<ArrowId> = Vec::new();

/// Incremental constructor; composition is supplied as a function at the end.
pub struct BaseBuilder {
    name: String,
    kind: BaseKind,
    max_deg: usize,
    strictness: Strictness,
    objects: Vec<Object>,
    arrows: Vec<Arrow>,
    identities: Vec<Option<ArrowId>>,
}

impl BaseBuilder {
    pub fn new(name: impl Into<String>, kind: BaseKind, max_deg: usize, strictness: Strictness) -> Self {
        BaseBuilder {
            name: name.into(),
            kind,
            max_deg,
            strictness,
            objects: Vec::new(),
            arrows: Vec::new(),
            identities: Vec::new(),
        }
    }

    pub fn add_object(&mut self, label: impl Into<String>, degree: Degree, level: usize) -> ObjId {
        self.objects.push(Object { label: label.into(), degree, level });
        self.identities.push(None);
        self.objects.len() - 1
    }

    pub fn add_arrow(&mut self, dom: ObjId, cod: ObjId, label: impl Into<String>, is_identity: bool) -> ArrowId {
        self.arrows.push(Arrow { dom, cod, label: label.into() });
        let id = self.arrows.len() - 1;
        if is_identity {
            assert_eq!(dom, cod);
            self.identities[dom] = Some(id);
        }
        id
    }

    /// `compose(g, f)` must return `g ∘ f` for every composable pair.
    pub fn finish(
        self,
        mut compose: impl FnMut(ArrowId, ArrowId) -> Result<ArrowId>,
    ) -> Result<BaseCategory> {
        let n = self.objects.len();
        let mut identities = Vec::with_capacity(n);
        for (x, id) in self.identities.iter().enumerate() {
            identities.push(id.ok_or_else(|| {
                Error::InvalidCategory(format!("object `{}` has no identity", self.objects[x].label))
            })?);
        }
        let mut hom: HashMap<(ObjId, ObjId), Vec<ArrowId>> = HashMap::new();
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        let mut hom_pos = vec![0; self.arrows.len()];
        let mut out_pos = vec![0; self.arrows.len()];
        for (a, arrow) in self.arrows.iter().enumerate() {
            let list = hom.entry((arrow.dom, arrow.cod)).or_default();
            hom_pos[a] = list.len();
            list.push(a);
            incoming[arrow.cod].push(a);
            out_pos[a] = outgoing[arrow.dom].len();
            outgoing[arrow.dom].push(a);
        }
        let mut table = Vec::with_capacity(self.arrows.len());
        for (f, arrow) in self.arrows.iter().enumerate() {
            let mut row = Vec::with_capacity(outgoing[arrow.cod].len());
            for &g in &outgoing[arrow.cod] {
                let h = compose(g, f)?;
                let ha = &self.arrows[h];
                if ha.dom != arrow.dom || ha.cod != self.arrows[g].cod {
                    return Err(Error::InvalidCategory(format!(
                        "composite of `{}` after `{}` has the wrong boundary",
                        self.arrows[g].label, arrow.label
                    )));
                }
                row.push(h);
            }
            table.push(row);
        }
        let obj_by_label = self.objects.iter().enumerate().map(|(i, o)| (o.label.clone(), i)).collect();
        let arrow_by_label = self.arrows.iter().enumerate().map(|(i, a)| (a.label.clone(), i)).collect();
        Ok(BaseCategory {
            name: self.name,
            kind: self.kind,
            max_deg: self.max_deg,
            strictness: self.strictness,
            objects: self.objects,
            arrows: self.arrows,
            hom,
            incoming,
            outgoing,
            hom_pos,
            out_pos,
            identities,
            compose: table,
            obj_by_label,
            arrow_by_label,
            monoidal: None,
        })
    }
}

impl BaseCategory {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn strictness(&self) -> Strictness {
        self.strictness
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn object(&self, x: ObjId) -> &Object {
        &self.objects[x]
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn degree(&self, x: ObjId) -> &Degree {
        &self.objects[x].degree
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &[ArrowId] {
        self.hom.get(&(x, y)).unwrap_or(&EMPTY)
    }

    /// Position of `a` inside `hom(dom a, cod a)`.
    pub fn hom_position(&self, a: ArrowId) -> usize {
        self.hom_pos[a]
    }

    pub fn incoming(&self, x: ObjId) -> &[ArrowId] {
        &self.incoming[x]
    }

    pub fn outgoing(&self, x: ObjId) -> &[ArrowId] {
        &self.outgoing[x]
    }

    pub fn identity(&self, x: ObjId) -> ArrowId {
        self.identities[x]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        self.identities[self.arrows[a].dom] == a
    }

    pub fn dom(&self, a: ArrowId) -> ObjId {
        self.arrows[a].dom
    }

    pub fn cod(&self, a: ArrowId) -> ObjId {
        self.arrows[a].cod
    }

    /// `g ∘ f`; panics when not composable.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> ArrowId {
        assert_eq!(self.arrows[g].dom, self.arrows[f].cod, "non-composable arrows");
        self.compose[f][self.out_pos[g]]
    }

    pub fn try_compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        (self.arrows[g].dom == self.arrows[f].cod).then(|| self.compose[f][self.out_pos[g]])
    }

    pub fn object_by_label(&self, label: &str) -> Result<ObjId> {
        self.obj_by_label.get(label).copied().ok_or_else(|| Error::UnknownObject(label.to_string()))
    }

    pub fn arrow_by_label(&self, label: &str) -> Result<ArrowId> {
        self.arrow_by_label.get(label).copied().ok_or_else(|| Error::UnknownArrow(label.to_string()))
    }

    pub fn monoidal(&self) -> Option<&Monoidal> {
        self.monoidal.as_ref()
    }

    pub fn set_monoidal(&mut self, m: Monoidal) {
        self.monoidal = Some(m);
    }

    /// Objects sorted by degree, ties by id.
    pub fn objects_by_degree(&self) -> Vec<ObjId> {
        let mut order: Vec<ObjId> = (0..self.objects.len()).collect();
        order.sort_by(|&a, &b| self.objects[a].degree.cmp(&self.objects[b].degree).then(a.cmp(&b)));
        order
    }

    /// An arrow is invertible when some arrow back composes to identities both ways.
    pub fn is_iso(&self, a: ArrowId) -> bool {
        let (x, y) = (self.dom(a), self.cod(a));
        self.hom(y, x)
            .iter()
            .any(|&b| self.compose(b, a) == self.identity(x) && self.compose(a, b) == self.identity(y))
    }

    /// Identity and associativity laws over every composable pair and triple.
    pub fn validate_laws(&self) -> Result<LawReport> {
        let mut report = LawReport::default();
        for (f, arrow) in self.arrows.iter().enumerate() {
            if self.compose(self.identities[arrow.cod], f) != f || self.compose(f, self.identities[arrow.dom]) != f {
                return Err(Error::InvalidCategory(format!("identity law fails at `{}`", arrow.label)));
            }
        }
        for f in 0..self.arrows.len() {
            for &g in self.outgoing(self.cod(f)) {
                report.pairs += 1;
                let gf = self.compose(g, f);
                for &h in self.outgoing(self.cod(g)) {
                    report.triples += 1;
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails at ({}, {}, {})",
                            self.arrows[h].label, self.arrows[g].label, self.arrows[f].label
                        )));
                    }
                }
            }
        }
        Ok(report)
    }

    /// Arrows violating the direct (or EZ) degree condition.
    pub fn degree_violations(&self) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&a| {
                if self.is_identity(a) {
                    return false;
                }
                let (dx, dy) = (self.degree(self.dom(a)), self.degree(self.cod(a)));
                match self.strictness {
                    Strictness::Direct => dx >= dy,
                    Strictness::Ez => dx > dy || (dx == dy && !self.is_iso(a)),
                }
            })
            .collect()
    }

    /// Full subcategory on the objects selected by `keep`, with its inclusion.
    pub fn full_subcategory(
        self: &Arc<Self>,
        name: impl Into<String>,
        keep: impl Fn(ObjId) -> bool,
    ) -> Result<(Arc<BaseCategory>, Functor)> {
        let mut builder = BaseBuilder::new(name, self.kind, self.max_deg, self.strictness);
        let mut new_obj = vec![None; self.objects.len()];
        let mut obj_map = Vec::new();
        for (x, o) in self.objects.iter().enumerate() {
            if keep(x) {
                new_obj[x] = Some(builder.add_object(o.label.clone(), o.degree.clone(), o.level));
                obj_map.push(x);
            }
        }
        let mut new_arrow = vec![None; self.arrows.len()];
        let mut arrow_map = Vec::new();
        for (a, arrow) in self.arrows.iter().enumerate() {
            if let (Some(d), Some(c)) = (new_obj[arrow.dom], new_obj[arrow.cod]) {
                new_arrow[a] = Some(builder.add_arrow(d, c, arrow.label.clone(), self.is_identity(a)));
                arrow_map.push(a);
            }
        }
        let sub = builder.finish(|g, f| {
            let h = self.compose(arrow_map[g], arrow_map[f]);
            new_arrow[h].ok_or_else(|| Error::InvalidCategory("full subcategory not closed".into()))
        })?;
        let mut sub = sub;
        if let Some(m) = &self.monoidal {
            if let Some(unit) = new_obj[m.unit] {
                let mut objects = HashMap::new();
                for (&(x, y), &z) in &m.objects {
                    if let (Some(a), Some(b), Some(c)) = (new_obj[x], new_obj[y], new_obj[z]) {
                        objects.insert((a, b), c);
                    }
                }
                let mut arrows = HashMap::new();
                for (&(f, g), &h) in &m.arrows {
                    if let (Some(a), Some(b), Some(c)) = (new_arrow[f], new_arrow[g], new_arrow[h]) {
                        arrows.insert((a, b), c);
                    }
                }
                sub.set_monoidal(Monoidal { unit, objects, arrows });
            }
        }
        let sub = Arc::new(sub);
        let inclusion = Functor::new(sub.clone(), self.clone(), obj_map, arrow_map)?;
        Ok((sub, inclusion))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub pairs: usize,
    pub triples: usize,
}

/// Two bases are interchangeable when they are the same allocation or were
/// built by the same construction.
pub fn same_base(a: &Arc<BaseCategory>, b: &Arc<BaseCategory>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.name == b.name
            && a.kind == b.kind
            && a.objects.len() == b.objects.len()
            && a.arrows.len() == b.arrows.len()
            && a.arrows.iter().zip(&b.arrows).all(|(x, y)| x.label == y.label))
}

/// A functor between finite presented categories.
#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Arc<BaseCategory>,
    pub target: Arc<BaseCategory>,
    pub objects: Vec<ObjId>,
    pub arrows: Vec<ArrowId>,
}

impl Functor {
    pub fn new(
        source: Arc<BaseCategory>,
        target: Arc<BaseCategory>,
        objects: Vec<ObjId>,
        arrows: Vec<ArrowId>,
    ) -> Result<Functor> {
        if objects.len() != source.num_objects() || arrows.len() != source.num_arrows() {
            return Err(Error::Shape("functor tables do not match the source".into()));
        }
        Ok(Functor { source, target, objects, arrows })
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.objects[x]
    }

    pub fn arrow(&self, a: ArrowId) -> ArrowId {
        self.arrows[a]
    }

    /// Boundaries, identities and every composable pair.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for a in 0..s.num_arrows() {
            let fa = self.arrows[a];
            if t.dom(fa) != self.objects[s.dom(a)] || t.cod(fa) != self.objects[s.cod(a)] {
                return Err(Error::InvalidCategory(format!("functor breaks the boundary of `{}`", s.arrow(a).label)));
            }
        }
        for x in 0..s.num_objects() {
            if self.arrows[s.identity(x)] != t.identity(self.objects[x]) {
                return Err(Error::InvalidCategory(format!("functor moves the identity of `{}`", s.object(x).label)));
            }
        }
        for f in 0..s.num_arrows() {
            for &g in s.outgoing(s.cod(f)) {
                if self.arrows[s.compose(g, f)] != t.compose(self.arrows[g], self.arrows[f]) {
                    return Err(Error::InvalidCategory(format!(
                        "functor does not preserve `{}` ∘ `{}`",
                        s.arrow(g).label,
                        s.arrow(f).label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        let mut hit = vec![false; self.target.num_objects()];
        for &y in &self.objects {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// The cube category (plain or symmetric) on `I^0 .. I^max_deg`, with `⊗` wherever it stays in range.
pub fn cube_base(mode: HomMode, max_deg: usize) -> Arc<BaseCategory> {
    let (kind, strictness) = match mode {
        HomMode::Plain => (BaseKind::CubePlain, Strictness::Direct),
        HomMode::Symmetric => (BaseKind::CubeSym, Strictness::Ez),
    };
    let mut b = BaseBuilder::new(format!("{}<={max_deg}", kind.name()), kind, max_deg, strictness);
    for n in 0..=max_deg {
        b.add_object(format!("I{n}"), Degree(vec![n as u32]), n);
    }
    let mut mors = Vec::new();
    let mut index = HashMap::new();
    for m in 0..=max_deg {
        for n in 0..=m {
            for f in enumerate_hom(n, m, mode) {
                let id = b.add_arrow(n, m, f.label(), f.is_identity());
                index.insert(f.clone(), id);
                mors.push(f);
            }
        }
    }
    let mut base = b
        .finish(|g, f| {
            let h = compose_cube(&mors[g], &mors[f])?;
            index.get(&h).copied().ok_or_else(|| Error::InvalidCategory(format!("composite {h} missing")))
        })
        .expect("cube categories are closed under composition");
    let mut monoidal = Monoidal { unit: 0, ..Default::default() };
    for n in 0..=max_deg {
        for m in 0..=max_deg - n {
            monoidal.objects.insert((n, m), n + m);
        }
    }
    for (f, fm) in mors.iter().enumerate() {
        for (g, gm) in mors.iter().enumerate() {
            if fm.cod() + gm.cod() <= max_deg {
                monoidal.arrows.insert((f, g), index[&tensor_cube(fm, gm)]);
            }
        }
    }
    base.set_monoidal(monoidal);
    Arc::new(base)
}

/// Look up a cube morphism as an arrow of a cube base.
pub fn cube_arrow(base: &BaseCategory, f: &CubeMor) -> Result<ArrowId> {
    base.arrow_by_label(&f.label())
}

/// The augmented semi-simplex category on `[-1] .. [max_deg - 1]` (so that
/// `r` lands in cubes of dimension at most `max_deg`), monoidal under join.
pub fn simplex_base(max_deg: usize) -> Arc<BaseCategory> {
    let top = max_deg as isize - 1;
    let mut b = BaseBuilder::new(format!("simplex<={max_deg}"), BaseKind::Simplex, max_deg, Strictness::Direct);
    for n in -1..=top {
        b.add_object(format!("[{n}]"), Degree(vec![(n + 1) as u32]), (n + 1) as usize);
    }
    let mut mors = Vec::new();
    let mut index = HashMap::new();
    for c in -1..=top {
        for d in -1..=c {
            for k in SimplexMor::enumerate(d, c) {
                let id = b.add_arrow((d + 1) as usize, (c + 1) as usize, k.to_string(), k.is_identity());
                index.insert(k.clone(), id);
                mors.push(k);
            }
        }
    }
    let mut base = b
        .finish(|g, f| Ok(index[&mors[g].after(&mors[f])?]))
        .expect("simplex category is closed under composition");
    let mut monoidal = Monoidal { unit: 0, ..Default::default() };
    for x in 0..=max_deg {
        for y in 0..=max_deg - x {
            monoidal.objects.insert((x, y), x + y);
        }
    }
    for (f, fm) in mors.iter().enumerate() {
        for (g, gm) in mors.iter().enumerate() {
            let j = fm.join(gm);
            if let Some(&h) = index.get(&j) {
                monoidal.arrows.insert((f, g), h);
            }
        }
    }
    base.set_monoidal(monoidal);
    Arc::new(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_bases_satisfy_laws() {
        for mode in [HomMode::Plain, HomMode::Symmetric] {
            let base = cube_base(mode, 3);
            base.validate_laws().unwrap();
            assert!(base.degree_violations().is_empty());
        }
        assert_eq!(cube_base(HomMode::Symmetric, 3).num_arrows(), 1 + 4 + 20 + 128);
    }

    #[test]
    fn symmetric_cubes_are_not_direct() {
        let base = cube_base(HomMode::Symmetric, 1);
        let rev = cube_arrow(&base, &CubeMor::reversal()).unwrap();
        assert!(base.is_iso(rev));
        assert!(!base.is_identity(rev));
    }

    #[test]
    fn simplex_base_laws() {
        let base = simplex_base(3);
        base.validate_laws().unwrap();
        assert_eq!(base.num_objects(), 4);
        assert!(base.degree_violations().is_empty());
    }

    #[test]
    fn full_subcategory_restricts() {
        let base = cube_base(HomMode::Plain, 3);
        let (sub, inc) = base.full_subcategory("low", |x| x <= 1).unwrap();
        assert_eq!(sub.num_objects(), 2);
        assert_eq!(sub.num_arrows(), 1 + 2 + 1);
        inc.validate().unwrap();
        sub.validate_laws().unwrap();
    }
}
