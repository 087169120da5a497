//! The category `D_R` for `R = □♯ˢ`, `R₀ = Δ_{a,♯}`.
//!
//! Arrows of `F_≃(R)` are words of cube morphisms in which adjacent letters
//! from the image of `r` have been composed and identities deleted. Objects of
//! `D_R` are the words `r(k)` or `r(k) · w` with `w` an automorphism, and a
//! morphism `s -> t` is a pair of legs `u: dom t -> dom s`, `v: cod s -> cod t`
//! with `t = v · s · u`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{cube_base, BaseBuilder, BaseCategory, BaseKind, Degree, Functor, Monoidal, ObjId, Strictness};
use crate::cube::{compose_cube, enumerate_hom, r_functor, r_preimage, tensor_cube, CubeMor, HomMode};
use crate::error::{Error, Result};
use crate::simplex::SimplexMor;

/// Largest supported truncation; `D_R` grows quickly beyond it.
pub const MAX_SUPPORTED_DEGREE: usize = 3;

/// A word in `F_≃(R)`, letters listed in order of application.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FWord {
    dom: usize,
    cod: usize,
    letters: Vec<CubeMor>,
}

impl FWord {
    pub fn empty(n: usize) -> FWord {
        FWord { dom: n, cod: n, letters: Vec::new() }
    }

    pub fn letter(f: CubeMor) -> FWord {
        FWord::normalize(f.dom(), vec![f]).expect("a single letter is composable")
    }

    /// Normal form of a raw composable letter list starting at `I^dom`.
    pub fn normalize(dom: usize, raw: Vec<CubeMor>) -> Result<FWord> {
        let mut cod = dom;
        let mut out: Vec<CubeMor> = Vec::with_capacity(raw.len());
        for f in raw {
            if f.dom() != cod {
                return Err(Error::NonComposable(format!("letter {f} does not start at I^{cod}")));
            }
            cod = f.cod();
            if f.is_identity() {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.is_r_image() && f.is_r_image() => {
                    let merged = compose_cube(&f, top)?;
                    if merged.is_identity() {
                        out.pop();
                    } else {
                        *top = merged;
                    }
                }
                _ => out.push(f),
            }
        }
        Ok(FWord { dom, cod, letters: out })
    }

    /// Checks the normal-form invariants of a word read from outside.
    pub fn from_letters(dom: usize, cod: usize, letters: Vec<CubeMor>) -> Result<FWord> {
        let w = FWord::normalize(dom, letters.clone())?;
        if w.cod != cod {
            return Err(Error::NonComposable(format!("word ends at I^{} instead of I^{cod}", w.cod)));
        }
        if w.letters != letters {
            return Err(Error::Parse("word is not in normal form".into()));
        }
        Ok(w)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn letters(&self) -> &[CubeMor] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.letters.iter().all(|f| !f.is_identity())
            && self.letters.windows(2).all(|p| !(p[0].is_r_image() && p[1].is_r_image()))
    }

    /// Letters outside the image of `r`.
    pub fn free_count(&self) -> usize {
        self.letters.iter().filter(|f| !f.is_r_image()).count()
    }

    /// `self` followed by `next`, normalized.
    pub fn then(&self, next: &FWord) -> Result<FWord> {
        if self.cod != next.dom {
            return Err(Error::NonComposable(format!("I^{} vs I^{}", self.cod, next.dom)));
        }
        let mut raw = self.letters.clone();
        raw.extend(next.letters.iter().cloned());
        FWord::normalize(self.dom, raw)
    }

    /// The composite in `R`.
    pub fn p0(&self) -> CubeMor {
        let mut acc = CubeMor::identity(self.dom);
        for f in &self.letters {
            acc = compose_cube(f, &acc).expect("normal words are composable");
        }
        acc
    }

    /// Splits into (leading r-image letter, rest).
    fn split_leading_r(&self) -> (Option<&CubeMor>, &[CubeMor]) {
        match self.letters.first() {
            Some(f) if f.is_r_image() => (Some(f), &self.letters[1..]),
            _ => (None, &self.letters[..]),
        }
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id{}", self.dom);
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{}", l.label())?;
        }
        Ok(())
    }
}

/// An object `r(k)` followed by the automorphism `w` (identity when absent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DrObject {
    pub k: SimplexMor,
    pub w: CubeMor,
}

impl DrObject {
    pub fn new(k: SimplexMor, w: CubeMor) -> Result<DrObject> {
        if !w.is_automorphism() || w.dom() as isize != k.cod() + 1 {
            return Err(Error::Shape(format!("{w} is not an automorphism of I^{}", k.cod() + 1)));
        }
        Ok(DrObject { k, w })
    }

    /// The object `0 = ([-1] -> [-1], id)`.
    pub fn zero() -> DrObject {
        DrObject { k: SimplexMor::identity(-1), w: CubeMor::identity(0) }
    }

    /// Identity arrow of `I^n` viewed as an object.
    pub fn identity_at(n: usize) -> DrObject {
        DrObject { k: SimplexMor::identity(n as isize - 1), w: CubeMor::identity(n) }
    }

    pub fn dom_dim(&self) -> usize {
        (self.k.dom() + 1) as usize
    }

    pub fn cod_dim(&self) -> usize {
        (self.k.cod() + 1) as usize
    }

    pub fn flag(&self) -> usize {
        usize::from(!self.w.is_identity())
    }

    pub fn word(&self) -> FWord {
        let mut letters = Vec::new();
        if !self.k.is_identity() {
            letters.push(r_functor(&self.k));
        }
        if !self.w.is_identity() {
            letters.push(self.w.clone());
        }
        FWord { dom: self.dom_dim(), cod: self.cod_dim(), letters }
    }

    /// Recognizes words of object shape.
    pub fn from_word(word: &FWord) -> Option<DrObject> {
        let n = word.cod;
        let (k, rest) = match word.split_leading_r() {
            (Some(f), rest) => (r_preimage(f)?, rest),
            (None, rest) => (SimplexMor::identity(word.dom as isize - 1), rest),
        };
        match rest {
            [] => Some(DrObject { k, w: CubeMor::identity(n) }),
            [w] if w.is_automorphism() => Some(DrObject { k, w: w.clone() }),
            _ => None,
        }
    }

    /// `(cod degree, cod - dom degree, iso flag)`.
    pub fn degree(&self) -> Degree {
        Degree(vec![self.cod_dim() as u32, (self.cod_dim() - self.dom_dim()) as u32, self.flag() as u32])
    }

    pub fn label(&self) -> String {
        let w = if self.w.is_identity() { "id".to_string() } else { self.w.label() };
        format!("{}|{}", self.k, w)
    }
}

/// A morphism of `D_R` by its legs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DrMor {
    pub source: ObjId,
    pub target: ObjId,
    pub u: FWord,
    pub v: FWord,
}

fn r_words_into(n: usize) -> Vec<FWord> {
    // Words with no free letter ending at I^n: the empty word and r(k).
    let mut out = vec![FWord::empty(n)];
    for a in -1..n as isize - 1 {
        for k in SimplexMor::enumerate(a, n as isize - 1) {
            out.push(FWord::letter(r_functor(&k)));
        }
    }
    out
}

fn r_words_from(n: usize, max_deg: usize) -> Vec<FWord> {
    let mut out = vec![FWord::empty(n)];
    for b in n + 1..=max_deg {
        for k in SimplexMor::enumerate(n as isize - 1, b as isize - 1) {
            out.push(FWord::letter(r_functor(&k)));
        }
    }
    out
}

fn free_letters(p: usize, q: usize) -> Vec<CubeMor> {
    enumerate_hom(p, q, HomMode::Symmetric).into_iter().filter(|f| !f.is_r_image()).collect()
}

/// Normal words with exactly one free letter, `r? · f · r?`, ending at `I^n`.
fn free_words_into(n: usize) -> Vec<FWord> {
    let mut out = Vec::new();
    for q in 0..=n {
        let posts = r_words_into(n).into_iter().filter(|w| w.dom == q).collect::<Vec<_>>();
        for p in 0..=q {
            let frees = free_letters(p, q);
            if frees.is_empty() {
                continue;
            }
            let pres = r_words_into(p);
            for pre in &pres {
                for f in &frees {
                    for post in &posts {
                        let mut raw = pre.letters.clone();
                        raw.push(f.clone());
                        raw.extend(post.letters.iter().cloned());
                        out.push(FWord { dom: pre.dom, cod: n, letters: raw });
                    }
                }
            }
        }
    }
    out
}

fn free_words_from(n: usize, max_deg: usize) -> Vec<FWord> {
    let mut out = Vec::new();
    for p in n..=max_deg {
        let pres = r_words_from(n, max_deg).into_iter().filter(|w| w.cod == p).collect::<Vec<_>>();
        for q in p..=max_deg {
            let frees = free_letters(p, q);
            let posts = r_words_from(q, max_deg);
            for pre in &pres {
                for f in &frees {
                    for post in &posts {
                        let mut raw = pre.letters.clone();
                        raw.push(f.clone());
                        raw.extend(post.letters.iter().cloned());
                        out.push(FWord { dom: n, cod: post.cod, letters: raw });
                    }
                }
            }
        }
    }
    out
}

/// Every morphism out of `s` whose target lies within the truncation, as
/// `(u, v, target)`. Legs carry at most `1 - flag(s)` free letters in total.
pub fn morphisms_from(s: &DrObject, max_deg: usize) -> Vec<(FWord, FWord, DrObject)> {
    let sw = s.word();
    let budget = 1 - s.flag();
    let u0 = r_words_into(s.dom_dim());
    let v0 = r_words_from(s.cod_dim(), max_deg);
    let mut pairs: Vec<(&FWord, &FWord)> = Vec::new();
    let (u1, v1);
    for u in &u0 {
        for v in &v0 {
            pairs.push((u, v));
        }
    }
    if budget == 1 {
        u1 = free_words_into(s.dom_dim());
        v1 = free_words_from(s.cod_dim(), max_deg);
        for u in &u1 {
            for v in &v0 {
                pairs.push((u, v));
            }
        }
        for u in &u0 {
            for v in &v1 {
                pairs.push((u, v));
            }
        }
    }
    let mut out = Vec::new();
    for (u, v) in pairs {
        let t = u.then(&sw).and_then(|w| w.then(v)).expect("legs are composable by construction");
        if let Some(obj) = DrObject::from_word(&t) {
            out.push((u.clone(), v.clone(), obj));
        }
    }
    out
}

/// All morphisms `s -> t` by the budgeted leg search.
pub fn enumerate_drhom(s: &DrObject, t: &DrObject, max_deg: usize) -> Vec<(FWord, FWord)> {
    if t.flag() < s.flag() {
        return Vec::new();
    }
    morphisms_from(s, max_deg.max(t.cod_dim()))
        .into_iter()
        .filter(|(_, _, obj)| obj == t)
        .map(|(u, v, _)| (u, v))
        .collect()
}

/// A truncation `(D_R)_{≤N}` with its presented base category.
pub struct DrCategory {
    max_deg: usize,
    objects: Vec<DrObject>,
    morphisms: Vec<DrMor>,
    object_index: HashMap<DrObject, ObjId>,
    morphism_index: HashMap<(ObjId, ObjId, FWord, FWord), usize>,
    base: Arc<BaseCategory>,
    r_base: Arc<BaseCategory>,
}

impl fmt::Debug for DrCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DrCategory(<= {}, {} objects, {} morphisms)", self.max_deg, self.objects.len(), self.morphisms.len())
    }
}

/// Objects in build order: by codomain dimension, then domain, then `k`, then `w`.
pub fn enumerate_objects(max_deg: usize) -> Vec<DrObject> {
    let mut out = Vec::new();
    for n in 0..=max_deg {
        let b = n as isize - 1;
        let autos: Vec<CubeMor> = enumerate_hom(n, n, HomMode::Symmetric);
        for a in -1..=b {
            for k in SimplexMor::enumerate(a, b) {
                for w in &autos {
                    out.push(DrObject { k: k.clone(), w: w.clone() });
                }
            }
        }
    }
    out
}

impl DrCategory {
    pub fn build(max_deg: usize) -> Result<DrCategory> {
        if max_deg > MAX_SUPPORTED_DEGREE {
            return Err(Error::Truncation(format!(
                "D_R is built up to degree {MAX_SUPPORTED_DEGREE}, asked for {max_deg}"
            )));
        }
        let objects = enumerate_objects(max_deg);
        let index: HashMap<DrObject, ObjId> = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let mut morphisms = Vec::new();
        for (s, obj) in objects.iter().enumerate() {
            for (u, v, t) in morphisms_from(obj, max_deg) {
                morphisms.push(DrMor { source: s, target: index[&t], u, v });
            }
        }
        let degrees = objects.iter().map(DrObject::degree).collect();
        DrCategory::from_parts(max_deg, objects, degrees, morphisms)
    }

    /// Assembles and validates a category from explicit objects, degrees and
    /// morphisms. Composition is computed on legs and must land in the list.
    pub fn from_parts(
        max_deg: usize,
        objects: Vec<DrObject>,
        degrees: Vec<Degree>,
        mut morphisms: Vec<DrMor>,
    ) -> Result<DrCategory> {
        let object_index: HashMap<DrObject, ObjId> =
            objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        if object_index.len() != objects.len() {
            return Err(Error::InvalidCategory("duplicate objects".into()));
        }
        // Identities first within each source so that hom lists start with them.
        morphisms.sort_by(|a, b| {
            (a.target, a.source, !(a.u.is_empty() && a.v.is_empty()), &a.u, &a.v).cmp(&(
                b.target,
                b.source,
                !(b.u.is_empty() && b.v.is_empty()),
                &b.u,
                &b.v,
            ))
        });
        let mut builder = BaseBuilder::new(format!("dr<={max_deg}"), BaseKind::Dr, max_deg, Strictness::Direct);
        for (o, d) in objects.iter().zip(degrees) {
            builder.add_object(o.label(), d, o.cod_dim());
        }
        let mut morphism_index = HashMap::with_capacity(morphisms.len());
        for (i, m) in morphisms.iter().enumerate() {
            let (s, t) = (&objects[m.source], &objects[m.target]);
            if m.u.dom != t.dom_dim() || m.u.cod != s.dom_dim() || m.v.dom != s.cod_dim() || m.v.cod != t.cod_dim() {
                return Err(Error::InvalidCategory(format!("legs of morphism {i} have the wrong ends")));
            }
            if !m.u.is_normal() || !m.v.is_normal() {
                return Err(Error::InvalidCategory(format!("legs of morphism {i} are not normal")));
            }
            if m.u.then(&s.word())?.then(&m.v)? != t.word() {
                return Err(Error::InvalidCategory(format!("morphism {i} violates the twisted-arrow equation")));
            }
            let identity = m.source == m.target && m.u.is_empty() && m.v.is_empty();
            builder.add_arrow(m.source, m.target, mor_label(&objects, m), identity);
            if morphism_index.insert((m.source, m.target, m.u.clone(), m.v.clone()), i).is_some() {
                return Err(Error::InvalidCategory(format!("morphism {i} is listed twice")));
            }
        }
        let base = builder.finish(|g, f| {
            let (mf, mg) = (&morphisms[f], &morphisms[g]);
            let u = mg.u.then(&mf.u)?;
            let v = mf.v.then(&mg.v)?;
            morphism_index.get(&(mf.source, mg.target, u, v)).copied().ok_or_else(|| {
                Error::InvalidCategory(format!(
                    "composite of {} after {} is not an enumerated morphism",
                    mor_label(&objects, mg),
                    mor_label(&objects, mf)
                ))
            })
        })?;
        let mut cat = DrCategory {
            max_deg,
            objects,
            morphisms,
            object_index,
            morphism_index,
            base: Arc::new(base),
            r_base: cube_base(HomMode::Symmetric, max_deg),
        };
        let monoidal = cat.monoidal_tables();
        Arc::get_mut(&mut cat.base).expect("base not yet shared").set_monoidal(monoidal);
        Ok(cat)
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.base
    }

    /// The symmetric cube category the projection lands in.
    pub fn r_base(&self) -> &Arc<BaseCategory> {
        &self.r_base
    }

    pub fn objects(&self) -> &[DrObject] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[DrMor] {
        &self.morphisms
    }

    pub fn object(&self, x: ObjId) -> &DrObject {
        &self.objects[x]
    }

    pub fn morphism(&self, a: usize) -> &DrMor {
        &self.morphisms[a]
    }

    pub fn object_id(&self, o: &DrObject) -> Option<ObjId> {
        self.object_index.get(o).copied()
    }

    pub fn morphism_id(&self, source: ObjId, target: ObjId, u: &FWord, v: &FWord) -> Option<usize> {
        self.morphism_index.get(&(source, target, u.clone(), v.clone())).copied()
    }

    /// The same objects and morphisms under another degree function.
    pub fn with_degrees(&self, degree: impl Fn(&DrObject) -> Degree) -> Result<DrCategory> {
        let degrees = self.objects.iter().map(degree).collect();
        DrCategory::from_parts(self.max_deg, self.objects.clone(), degrees, self.morphisms.clone())
    }

    /// `p : D_R -> R`, the codomain functor; on morphisms the composite of `v`.
    pub fn projection(&self) -> Result<Functor> {
        let objects = self.objects.iter().map(DrObject::cod_dim).collect();
        let arrows = self
            .morphisms
            .iter()
            .map(|m| crate::base::cube_arrow(&self.r_base, &m.v.p0()))
            .collect::<Result<_>>()?;
        Functor::new(self.base.clone(), self.r_base.clone(), objects, arrows)
    }

    /// Full subcategory on codomain dimension at most `n`.
    pub fn truncation(&self, n: usize) -> Result<(Arc<BaseCategory>, Functor)> {
        self.base
            .full_subcategory(format!("dr<={}|cod<={n}", self.max_deg), |x| self.objects[x].cod_dim() <= n)
    }

    fn monoidal_tables(&self) -> Monoidal {
        let mut m = Monoidal { unit: self.object_index[&DrObject::zero()], ..Default::default() };
        for (i, a) in self.objects.iter().enumerate() {
            for (j, b) in self.objects.iter().enumerate() {
                if let Ok(ab) = dr_tensor(a, b, self.max_deg) {
                    m.objects.insert((i, j), self.object_index[&ab]);
                }
            }
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for (g, mg) in self.morphisms.iter().enumerate() {
                if !m.objects.contains_key(&(mf.source, mg.source)) || !m.objects.contains_key(&(mf.target, mg.target)) {
                    continue;
                }
                if let Some(h) = self.tensor_morphisms(mf, mg) {
                    m.arrows.insert((f, g), h);
                }
            }
        }
        m
    }

    /// Slotwise tensor of morphisms, when it is a morphism between the tensored
    /// objects. Each leg is split as `r(pre) · free? · r(post)`; words without a
    /// free letter put their `r`-letter in `pre`. Pre and post parts are joined,
    /// free letters tensored with a missing one read as the identity.
    pub fn tensor_morphisms(&self, f: &DrMor, g: &DrMor) -> Option<usize> {
        let s = self.object_id(&dr_tensor(&self.objects[f.source], &self.objects[g.source], self.max_deg).ok()?)?;
        let t = self.object_id(&dr_tensor(&self.objects[f.target], &self.objects[g.target], self.max_deg).ok()?)?;
        let u = tensor_legs(&f.u, &g.u)?;
        let v = tensor_legs(&f.v, &g.v)?;
        self.morphism_id(s, t, &u, &v)
    }

    /// Free letters on the legs plus the source flag must give the target flag.
    pub fn conservation_violations(&self) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&i| {
                let m = &self.morphisms[i];
                m.u.free_count() + m.v.free_count() + self.objects[m.source].flag() != self.objects[m.target].flag()
            })
            .collect()
    }

    pub fn to_json(&self) -> DrJson {
        DrJson {
            max_degree: self.max_deg,
            objects: self
                .objects
                .iter()
                .enumerate()
                .map(|(i, o)| DrObjectJson {
                    id: i,
                    label: o.label(),
                    k: o.k.clone(),
                    w: o.w.clone(),
                    degree: self.base.degree(i).0.clone(),
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .enumerate()
                .map(|(i, m)| DrMorJson { id: i, source: m.source, target: m.target, u: m.u.clone(), v: m.v.clone() })
                .collect(),
        }
    }

    pub fn from_json(json: &DrJson) -> Result<DrCategory> {
        if json.max_degree > MAX_SUPPORTED_DEGREE {
            return Err(Error::Truncation(format!("max_degree {}", json.max_degree)));
        }
        let mut objects = Vec::with_capacity(json.objects.len());
        let mut degrees = Vec::with_capacity(json.objects.len());
        for (i, o) in json.objects.iter().enumerate() {
            if o.id != i {
                return Err(Error::Parse(format!("object ids must be 0.., found {} at {i}", o.id)));
            }
            objects.push(DrObject::new(o.k.clone(), o.w.clone())?);
            degrees.push(Degree(o.degree.clone()));
        }
        let mut morphisms = Vec::with_capacity(json.morphisms.len());
        for m in &json.morphisms {
            if m.source >= objects.len() || m.target >= objects.len() {
                return Err(Error::Parse(format!("morphism {} refers to a missing object", m.id)));
            }
            let u = FWord::from_letters(m.u.dom, m.u.cod, m.u.letters.clone())?;
            let v = FWord::from_letters(m.v.dom, m.v.cod, m.v.letters.clone())?;
            morphisms.push(DrMor { source: m.source, target: m.target, u, v });
        }
        DrCategory::from_parts(json.max_degree, objects, degrees, morphisms)
    }
}

fn mor_label(objects: &[DrObject], m: &DrMor) -> String {
    format!("{} => {} : {} / {}", objects[m.source].label(), objects[m.target].label(), m.u, m.v)
}

/// `(pre, free, post)` with `pre`, `post` in `Δ_{a,♯}`.
fn split_leg(w: &FWord) -> Option<(SimplexMor, Option<CubeMor>, SimplexMor)> {
    let mut it = w.letters.iter().peekable();
    let mut pre = SimplexMor::identity(w.dom as isize - 1);
    if let Some(f) = it.peek() {
        if f.is_r_image() {
            pre = r_preimage(f)?;
            it.next();
        }
    }
    let free = match it.peek() {
        Some(f) if !f.is_r_image() => it.next().cloned(),
        _ => None,
    };
    let here = free.as_ref().map_or(pre.cod(), |f| f.cod() as isize - 1);
    let post = match it.next() {
        Some(f) => r_preimage(f)?,
        None => SimplexMor::identity(here),
    };
    if it.next().is_some() {
        return None;
    }
    Some((pre, free, post))
}

fn tensor_legs(a: &FWord, b: &FWord) -> Option<FWord> {
    let (pa, fa, qa) = split_leg(a)?;
    let (pb, fb, qb) = split_leg(b)?;
    let free = match (fa, fb) {
        (None, None) => None,
        (fa, fb) => {
            let fa = fa.unwrap_or_else(|| CubeMor::identity((pa.cod() + 1) as usize));
            let fb = fb.unwrap_or_else(|| CubeMor::identity((pb.cod() + 1) as usize));
            Some(tensor_cube(&fa, &fb))
        }
    };
    let mut raw = vec![r_functor(&pa.join(&pb))];
    raw.extend(free);
    raw.push(r_functor(&qa.join(&qb)));
    FWord::normalize(a.dom + b.dom, raw).ok()
}

/// `(k ⋆ k', w ⊗ w')`, rejected beyond the truncation.
pub fn dr_tensor(a: &DrObject, b: &DrObject, max_deg: usize) -> Result<DrObject> {
    let n = a.cod_dim() + b.cod_dim();
    if n > max_deg {
        return Err(Error::Truncation(format!("{} ⊗ {} has codomain I^{n}", a.label(), b.label())));
    }
    Ok(DrObject { k: a.k.join(&b.k), w: tensor_cube(&a.w, &b.w) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrJson {
    pub max_degree: usize,
    pub objects: Vec<DrObjectJson>,
    pub morphisms: Vec<DrMorJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrObjectJson {
    pub id: usize,
    pub label: String,
    pub k: SimplexMor,
    pub w: CubeMor,
    pub degree: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrMorJson {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub u: FWord,
    pub v: FWord,
}

/// Outcome of the directness check.
#[derive(Clone, Debug, Serialize)]
pub struct DirectnessReport {
    pub objects: usize,
    pub morphisms: usize,
    pub violations: usize,
    pub counterexample: Option<String>,
}

impl DirectnessReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub fn check_direct(cat: &DrCategory) -> DirectnessReport {
    let base = cat.base();
    let bad = base.degree_violations();
    let counterexample = bad.first().map(|&a| {
        let m = cat.morphism(a);
        format!(
            "{} : {} -> {}",
            base.arrow(a).label,
            base.degree(m.source),
            base.degree(m.target)
        )
    });
    DirectnessReport { objects: base.num_objects(), morphisms: base.num_arrows(), violations: bad.len(), counterexample }
}

/// Outcome of the contractibility zig-zag check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ZigzagReport {
    pub max_deg: usize,
    /// `d` is defined on every morphism and preserves identities and composites.
    pub d_functorial: bool,
    pub d_idempotent_on_objects: bool,
    pub eta_components: bool,
    pub eta_natural: bool,
    pub gamma_components: bool,
    pub gamma_natural: bool,
    pub restrictions_closed: bool,
    pub squares_checked: usize,
    pub eta_failures: usize,
    pub gamma_failures: usize,
    pub counterexamples: Vec<String>,
}

impl ZigzagReport {
    pub fn passed(&self) -> bool {
        self.d_functorial
            && self.d_idempotent_on_objects
            && self.eta_components
            && self.eta_natural
            && self.gamma_components
            && self.gamma_natural
            && self.restrictions_closed
    }
}

/// `d(k, w) = (![-1] -> [b], w)`.
pub fn d_object(o: &DrObject) -> DrObject {
    DrObject { k: SimplexMor::bang(o.k.cod()), w: o.w.clone() }
}

/// `d` on a morphism `(u, v)`: the domain leg becomes empty and the free
/// letter of `u`, if any, moves in front of `v`. Since `d(s)` and `d(t)` both
/// start at `I^0` this is the only candidate with the right free letters.
pub fn d_legs(cat: &DrCategory, m: &DrMor) -> Option<(FWord, FWord)> {
    let s = cat.object(m.source);
    let (_, rest) = m.u.split_leading_r();
    let mut raw: Vec<CubeMor> = rest.to_vec();
    raw.extend(m.v.letters.iter().cloned());
    let v = FWord::normalize(s.cod_dim(), raw).ok()?;
    Some((FWord::empty(0), v))
}

/// Checks `d`, `id -> d` and `c -> d` on the whole truncation and the
/// closure of everything under each `(D_R)_{≤n}`.
pub fn zigzag_check(cat: &DrCategory) -> ZigzagReport {
    let base = cat.base();
    let mut rep = ZigzagReport { max_deg: cat.max_deg(), ..Default::default() };
    let zero = cat.object_id(&DrObject::zero()).expect("object 0 exists");
    let note = |rep: &mut ZigzagReport, s: String| {
        if rep.counterexamples.len() < 8 {
            rep.counterexamples.push(s);
        }
    };

    // d on objects.
    let d_obj: Vec<ObjId> = cat.objects().iter().map(|o| cat.object_id(&d_object(o)).expect("d(x) in range")).collect();
    rep.d_idempotent_on_objects = (0..d_obj.len()).all(|x| d_obj[d_obj[x]] == d_obj[x]);

    // d on morphisms.
    let mut d_arrow = vec![None; cat.morphisms().len()];
    rep.d_functorial = true;
    for (a, m) in cat.morphisms().iter().enumerate() {
        d_arrow[a] = d_legs(cat, m).and_then(|(u, v)| cat.morphism_id(d_obj[m.source], d_obj[m.target], &u, &v));
        if d_arrow[a].is_none() {
            rep.d_functorial = false;
            note(&mut rep, format!("d undefined on {}", base.arrow(a).label));
        }
    }
    if rep.d_functorial {
        'outer: for f in 0..base.num_arrows() {
            if base.is_identity(f) && !base.is_identity(d_arrow[f].unwrap()) {
                rep.d_functorial = false;
                note(&mut rep, format!("d moves identity {}", base.arrow(f).label));
                break;
            }
            for &g in base.outgoing(base.cod(f)) {
                let lhs = d_arrow[base.compose(g, f)].unwrap();
                let rhs = base.compose(d_arrow[g].unwrap(), d_arrow[f].unwrap());
                if lhs != rhs {
                    rep.d_functorial = false;
                    note(&mut rep, format!("d(g∘f) ≠ d(g)∘d(f) at {} ∘ {}", base.arrow(g).label, base.arrow(f).label));
                    break 'outer;
                }
            }
        }
    }

    // Components of id -> d: u = r(![-1] -> [a]), v = empty.
    let mut eta = vec![None; cat.objects().len()];
    for (x, o) in cat.objects().iter().enumerate() {
        let u = FWord::normalize(0, vec![r_functor(&SimplexMor::bang(o.k.dom()))]).expect("single letter");
        eta[x] = cat.morphism_id(x, d_obj[x], &u, &FWord::empty(o.cod_dim()));
    }
    rep.eta_components = eta.iter().all(Option::is_some);
    rep.eta_natural = rep.eta_components && rep.d_functorial;
    // Components of c -> d: u = empty, v = word of d(x).
    let mut gamma = vec![None; cat.objects().len()];
    for x in 0..cat.objects().len() {
        let dx = cat.object(d_obj[x]);
        gamma[x] = cat.morphism_id(zero, d_obj[x], &FWord::empty(0), &dx.word());
    }
    rep.gamma_components = gamma.iter().all(Option::is_some);
    rep.gamma_natural = rep.gamma_components && rep.d_functorial;
    if rep.eta_components && rep.d_functorial {
        for (f, m) in cat.morphisms().iter().enumerate() {
            rep.squares_checked += 1;
            let lhs = base.compose(d_arrow[f].unwrap(), eta[m.source].unwrap());
            let rhs = base.compose(eta[m.target].unwrap(), f);
            if lhs != rhs {
                rep.eta_natural = false;
                rep.eta_failures += 1;
                note(
                    &mut rep,
                    format!(
                        "id -> d not natural at {}: d(f)∘η = {} but η∘f = {}",
                        base.arrow(f).label,
                        base.arrow(lhs).label,
                        base.arrow(rhs).label
                    ),
                );
            }
        }
    }
    if rep.gamma_components && rep.d_functorial {
        for (f, m) in cat.morphisms().iter().enumerate() {
            rep.squares_checked += 1;
            let lhs = base.compose(d_arrow[f].unwrap(), gamma[m.source].unwrap());
            if lhs != gamma[m.target].unwrap() {
                rep.gamma_natural = false;
                rep.gamma_failures += 1;
                note(&mut rep, format!("c -> d not natural at {}", base.arrow(f).label));
            }
        }
    }
    // d preserves codomains, and η, γ land in the truncation of their target,
    // so each (D_R)_{≤n} is closed as long as the maps exist.
    rep.restrictions_closed = (0..=cat.max_deg()).all(|n| {
        cat.objects().iter().enumerate().all(|(x, o)| {
            o.cod_dim() > n
                || (cat.object(d_obj[x]).cod_dim() <= n && eta[x].is_some() && gamma[x].is_some())
        })
    }) && rep.d_functorial;
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::CubeMor;

    #[test]
    fn identity_letters_vanish() {
        let w = FWord::normalize(1, vec![CubeMor::identity(1)]).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn face_then_reversal_is_not_delta_one() {
        let a = FWord::normalize(0, vec![CubeMor::face(0), CubeMor::reversal()]).unwrap();
        let b = FWord::normalize(0, vec![CubeMor::face(1)]).unwrap();
        assert_eq!(a.letters().len(), 2);
        assert_ne!(a, b);
        assert_eq!(a.p0(), b.p0());
    }

    #[test]
    fn object_counts() {
        let counts: Vec<usize> = (0..=3).map(|n| enumerate_objects(n).len()).collect();
        assert_eq!(counts, vec![1, 5, 37, 421]);
    }

    #[test]
    fn endomorphisms_are_identities() {
        let cat = DrCategory::build(2).unwrap();
        for x in 0..cat.objects().len() {
            assert_eq!(cat.base().hom(x, x).len(), 1);
        }
    }

    #[test]
    fn zero_to_delta_zero() {
        let s = DrObject::zero();
        let t = DrObject::new(SimplexMor::bang(0), CubeMor::identity(1)).unwrap();
        let homs = enumerate_drhom(&s, &t, 1);
        assert_eq!(homs.len(), 1);
        assert!(homs[0].0.is_empty());
        assert_eq!(homs[0].1.letters(), &[CubeMor::face(0)]);
    }

    #[test]
    fn flagged_to_unflagged_is_empty() {
        let s = DrObject::new(SimplexMor::bang(0), CubeMor::reversal()).unwrap();
        let t = DrObject::new(SimplexMor::bang(1), CubeMor::identity(2)).unwrap();
        assert!(enumerate_drhom(&s, &t, 2).is_empty());
    }

    #[test]
    fn build_is_direct_and_conservative() {
        let cat = DrCategory::build(2).unwrap();
        cat.base().validate_laws().unwrap();
        assert!(check_direct(&cat).passed());
        assert!(cat.conservation_violations().is_empty());
        cat.projection().unwrap().validate().unwrap();
    }

    #[test]
    fn dropping_the_flag_breaks_directness() {
        let cat = DrCategory::build(1).unwrap();
        let bad = cat
            .with_degrees(|o| Degree(vec![o.cod_dim() as u32, (o.cod_dim() - o.dom_dim()) as u32]))
            .unwrap();
        let report = check_direct(&bad);
        assert!(!report.passed());
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn json_round_trip() {
        let cat = DrCategory::build(1).unwrap();
        let text = serde_json::to_string(&cat.to_json()).unwrap();
        let back = DrCategory::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.morphisms().len(), cat.morphisms().len());
    }
}
