//! Semi-cubes with and without symmetries and reversals.
//!
//! A morphism `I^n -> I^m` is stored as its vector of `m` output coordinates.
//! Each coordinate is either a constant face `0`/`1` or a signed input axis
//! `t_i` / `1 - t_i`; every input axis occurs exactly once. This is a unique
//! normal form for the free symmetric monoidal category on two faces
//! `δ₀, δ₁ : I^0 -> I^1` and a reversal of `I^1`, and composition is
//! substitution.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::SimplexMor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// One output coordinate of a cube map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    /// Constant coordinate, `0` or `1`.
    Face(u8),
    /// Input coordinate `input` (1-based), reversed when the sign is negative.
    Axis { input: usize, sign: Sign },
}

impl Entry {
    pub fn axis(input: usize, sign: Sign) -> Entry {
        Entry::Axis { input, sign }
    }

    fn key(&self) -> (u8, usize, u8) {
        match *self {
            Entry::Face(e) => (0, 0, e),
            Entry::Axis { input, sign } => (1, input, if sign == Sign::Pos { 0 } else { 1 }),
        }
    }
}

/// Face(0) < Face(1) < Axis(1,+) < Axis(1,-) < Axis(2,+) < ...
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Entry::Face(e) => write!(f, "{e}"),
            Entry::Axis { input, sign: Sign::Pos } => write!(f, "+{input}"),
            Entry::Axis { input, sign: Sign::Neg } => write!(f, "-{input}"),
        }
    }
}

/// Hom-set flavour: `Plain` is □♯ (faces only), `Symmetric` is □♯ˢ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomMode {
    Plain,
    Symmetric,
}

/// A morphism `I^dom -> I^cod` of □♯ˢ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CubeMorRepr", into = "CubeMorRepr")]
pub struct CubeMor {
    dom: usize,
    entries: Vec<Entry>,
}

impl Ord for CubeMor {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dom, self.entries.len(), &self.entries).cmp(&(other.dom, other.entries.len(), &other.entries))
    }
}

impl PartialOrd for CubeMor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CubeMor {
    /// Validates that the axes occurring in `entries` are exactly `1..=dom`, once each.
    pub fn new(dom: usize, entries: Vec<Entry>) -> Result<Self> {
        let mut seen = vec![false; dom];
        for e in &entries {
            match *e {
                Entry::Face(v) if v > 1 => {
                    return Err(Error::Shape(format!("face label {v} is not 0 or 1")));
                }
                Entry::Face(_) => {}
                Entry::Axis { input, .. } => {
                    if input == 0 || input > dom {
                        return Err(Error::Shape(format!("axis {input} out of range for I^{dom}")));
                    }
                    if std::mem::replace(&mut seen[input - 1], true) {
                        return Err(Error::Shape(format!("axis {input} used twice")));
                    }
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Shape(format!("input axis {} of I^{dom} is never used", missing + 1)));
        }
        Ok(CubeMor { dom, entries })
    }

    pub fn identity(n: usize) -> Self {
        CubeMor { dom: n, entries: (1..=n).map(|i| Entry::axis(i, Sign::Pos)).collect() }
    }

    /// `δ_ε : I^0 -> I^1`.
    pub fn face(eps: u8) -> Self {
        assert!(eps <= 1);
        CubeMor { dom: 0, entries: vec![Entry::Face(eps)] }
    }

    /// The reversal `I^1 -> I^1`, `t ↦ 1 - t`.
    pub fn reversal() -> Self {
        CubeMor { dom: 1, entries: vec![Entry::axis(1, Sign::Neg)] }
    }

    /// The symmetry `I^2 -> I^2` exchanging the two coordinates.
    pub fn transposition() -> Self {
        CubeMor { dom: 2, entries: vec![Entry::axis(2, Sign::Pos), Entry::axis(1, Sign::Pos)] }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod()
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(j, e)| *e == Entry::axis(j + 1, Sign::Pos))
    }

    /// Lies in □♯: positive axes, in increasing order of position.
    pub fn is_plain(&self) -> bool {
        let mut next = 1;
        for e in &self.entries {
            if let Entry::Axis { input, sign } = *e {
                if sign != Sign::Pos || input != next {
                    return false;
                }
                next += 1;
            }
        }
        true
    }

    /// Lies in the image of `r`: plain with every face labelled 0.
    pub fn is_r_image(&self) -> bool {
        self.is_plain() && self.entries.iter().all(|e| *e != Entry::Face(1))
    }

    /// A signed permutation.
    pub fn is_automorphism(&self) -> bool {
        self.dom == self.cod() && self.entries.iter().all(|e| matches!(e, Entry::Axis { .. }))
    }

    /// Inverse of an automorphism.
    pub fn inverse(&self) -> Option<CubeMor> {
        if !self.is_automorphism() {
            return None;
        }
        let mut entries = vec![Entry::Face(0); self.dom];
        for (j, e) in self.entries.iter().enumerate() {
            if let Entry::Axis { input, sign } = *e {
                entries[input - 1] = Entry::axis(j + 1, sign);
            }
        }
        Some(CubeMor { dom: self.dom, entries })
    }

    pub fn semantics(&self) -> AffineMap {
        AffineMap {
            dom: self.dom,
            coords: self
                .entries
                .iter()
                .map(|e| match *e {
                    Entry::Face(v) => AffineCoord::Const(v),
                    Entry::Axis { input, sign: Sign::Pos } => AffineCoord::Var(input),
                    Entry::Axis { input, sign: Sign::Neg } => AffineCoord::CoVar(input),
                })
                .collect(),
        }
    }

    /// Compact label `dom>cod:e1,e2,...` used as an arrow name in files.
    pub fn label(&self) -> String {
        let body: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        format!("{}>{}:{}", self.dom, self.cod(), body.join(","))
    }

    pub fn parse_label(s: &str) -> Result<CubeMor> {
        let bad = || Error::Parse(format!("bad cube arrow label `{s}`"));
        let (dims, body) = s.split_once(':').ok_or_else(bad)?;
        let (dom, cod) = dims.split_once('>').ok_or_else(bad)?;
        let dom: usize = dom.trim().parse().map_err(|_| bad())?;
        let cod: usize = cod.trim().parse().map_err(|_| bad())?;
        let mut entries = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let e = match tok {
                "0" => Entry::Face(0),
                "1" => Entry::Face(1),
                t if t.starts_with('+') => Entry::axis(t[1..].parse().map_err(|_| bad())?, Sign::Pos),
                t if t.starts_with('-') => Entry::axis(t[1..].parse().map_err(|_| bad())?, Sign::Neg),
                _ => return Err(bad()),
            };
            entries.push(e);
        }
        if entries.len() != cod {
            return Err(bad());
        }
        CubeMor::new(dom, entries)
    }
}

impl fmt::Display for CubeMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Face { face: u8 },
    Axis { axis: usize, sign: i8 },
}

#[derive(Serialize, Deserialize)]
struct CubeMorRepr {
    dom: usize,
    cod: usize,
    entries: Vec<EntryRepr>,
}

impl TryFrom<CubeMorRepr> for CubeMor {
    type Error = Error;

    fn try_from(r: CubeMorRepr) -> Result<Self> {
        if r.entries.len() != r.cod {
            return Err(Error::Shape(format!("cod is {} but {} entries given", r.cod, r.entries.len())));
        }
        let entries = r
            .entries
            .into_iter()
            .map(|e| match e {
                EntryRepr::Face { face } => Ok(Entry::Face(face)),
                EntryRepr::Axis { axis, sign: 1 } => Ok(Entry::axis(axis, Sign::Pos)),
                EntryRepr::Axis { axis, sign: -1 } => Ok(Entry::axis(axis, Sign::Neg)),
                EntryRepr::Axis { sign, .. } => Err(Error::Shape(format!("sign must be 1 or -1, got {sign}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        CubeMor::new(r.dom, entries)
    }
}

impl From<CubeMor> for CubeMorRepr {
    fn from(f: CubeMor) -> Self {
        CubeMorRepr {
            dom: f.dom,
            cod: f.entries.len(),
            entries: f
                .entries
                .iter()
                .map(|e| match *e {
                    Entry::Face(face) => EntryRepr::Face { face },
                    Entry::Axis { input, sign } => EntryRepr::Axis { axis: input, sign: sign.as_i8() },
                })
                .collect(),
        }
    }
}

/// `g ∘ f`.
pub fn compose_cube(g: &CubeMor, f: &CubeMor) -> Result<CubeMor> {
    if g.dom != f.cod() {
        return Err(Error::Shape(format!("cannot compose {g} after {f}: I^{} vs I^{}", g.dom, f.cod())));
    }
    let entries = g
        .entries
        .iter()
        .map(|e| match *e {
            Entry::Face(v) => Entry::Face(v),
            Entry::Axis { input, sign } => match f.entries[input - 1] {
                Entry::Face(v) => Entry::Face(if sign == Sign::Pos { v } else { 1 - v }),
                Entry::Axis { input: inner, sign: s2 } => Entry::axis(inner, sign.times(s2)),
            },
        })
        .collect();
    Ok(CubeMor { dom: f.dom, entries })
}

/// `f ⊗ g`: concatenate outputs, shifting the axes of `g` past those of `f`.
pub fn tensor_cube(f: &CubeMor, g: &CubeMor) -> CubeMor {
    let mut entries = f.entries.clone();
    entries.extend(g.entries.iter().map(|e| match *e {
        Entry::Face(v) => Entry::Face(v),
        Entry::Axis { input, sign } => Entry::axis(input + f.dom, sign),
    }));
    CubeMor { dom: f.dom + g.dom, entries }
}

/// Every morphism `I^n -> I^m`, lexicographically ordered on entries.
pub fn enumerate_hom(n: usize, m: usize, mode: HomMode) -> Vec<CubeMor> {
    let mut out = Vec::new();
    if n > m {
        return out;
    }
    let mut alphabet = vec![Entry::Face(0), Entry::Face(1)];
    for i in 1..=n {
        alphabet.push(Entry::axis(i, Sign::Pos));
        if mode == HomMode::Symmetric {
            alphabet.push(Entry::axis(i, Sign::Neg));
        }
    }
    let mut used = vec![false; n + 1];
    let mut current = Vec::with_capacity(m);
    fill(n, m, mode, &alphabet, &mut used, &mut current, &mut out);
    out
}

fn fill(
    n: usize,
    m: usize,
    mode: HomMode,
    alphabet: &[Entry],
    used: &mut Vec<bool>,
    current: &mut Vec<Entry>,
    out: &mut Vec<CubeMor>,
) {
    let placed_axes = used.iter().filter(|u| **u).count();
    if current.len() == m {
        if placed_axes == n {
            out.push(CubeMor { dom: n, entries: current.clone() });
        }
        return;
    }
    let slots_left = m - current.len();
    for &e in alphabet {
        match e {
            Entry::Face(_) => {
                if slots_left <= n - placed_axes {
                    continue;
                }
            }
            Entry::Axis { input, .. } => {
                if used[input] {
                    continue;
                }
                if mode == HomMode::Plain && input != placed_axes + 1 {
                    continue;
                }
                used[input] = true;
            }
        }
        current.push(e);
        fill(n, m, mode, alphabet, used, current, out);
        current.pop();
        if let Entry::Axis { input, .. } = e {
            used[input] = false;
        }
    }
}

/// The monoidal functor `Δ_{a,♯} -> □♯ˢ`, `[n] ↦ I^{n+1}`, `![-1]->[0] ↦ δ₀`.
pub fn r_functor(k: &SimplexMor) -> CubeMor {
    let cod = (k.cod() + 1) as usize;
    let mut entries = vec![Entry::Face(0); cod];
    for (rank, &j) in k.image().iter().enumerate() {
        entries[j] = Entry::axis(rank + 1, Sign::Pos);
    }
    CubeMor { dom: (k.dom() + 1) as usize, entries }
}

/// The unique preimage under `r`, when `f` is in its image.
pub fn r_preimage(f: &CubeMor) -> Option<SimplexMor> {
    if !f.is_r_image() {
        return None;
    }
    let image = f
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, Entry::Axis { .. }))
        .map(|(j, _)| j)
        .collect();
    SimplexMor::new(f.dom as isize - 1, f.cod() as isize - 1, image).ok()
}

/// Factor `f = w ∘ r(k)` with `w` an automorphism.
///
/// Inputs already in the image of `r` come back as `(id, k)`. Otherwise `r(k)`
/// places the input axes first, in order, followed by `0`-faces; `w` routes
/// them to their positions in `f`, and a `1`-face becomes a reversed axis.
pub fn factor_surj(f: &CubeMor) -> (CubeMor, SimplexMor) {
    if let Some(k) = r_preimage(f) {
        return (CubeMor::identity(f.cod()), k);
    }
    let n = f.dom;
    let m = f.cod();
    let k = SimplexMor::new(n as isize - 1, m as isize - 1, (0..n).collect()).expect("prefix injection");
    let mut next_face_slot = n + 1;
    let entries = f
        .entries
        .iter()
        .map(|e| match *e {
            Entry::Axis { input, sign } => Entry::axis(input, sign),
            Entry::Face(v) => {
                let slot = next_face_slot;
                next_face_slot += 1;
                Entry::axis(slot, if v == 0 { Sign::Pos } else { Sign::Neg })
            }
        })
        .collect();
    (CubeMor { dom: m, entries }, k)
}

/// One coordinate of an affine cube map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AffineCoord {
    Const(u8),
    /// `t_i`
    Var(usize),
    /// `1 - t_i`
    CoVar(usize),
}

/// A map of unit cubes given coordinatewise by `0`, `1`, `t_i` or `1 - t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub dom: usize,
    pub coords: Vec<AffineCoord>,
}

impl AffineMap {
    pub fn cod(&self) -> usize {
        self.coords.len()
    }

    /// Evaluates at the grid point `point / denom` (each coordinate in `0..=denom`).
    pub fn eval(&self, point: &[u32], denom: u32) -> Vec<u32> {
        assert_eq!(point.len(), self.dom);
        self.coords
            .iter()
            .map(|c| match *c {
                AffineCoord::Const(v) => v as u32 * denom,
                AffineCoord::Var(i) => point[i - 1],
                AffineCoord::CoVar(i) => denom - point[i - 1],
            })
            .collect()
    }

    /// `self ∘ inner` by substitution.
    pub fn after(&self, inner: &AffineMap) -> Option<AffineMap> {
        if self.dom != inner.cod() {
            return None;
        }
        let coords = self
            .coords
            .iter()
            .map(|c| match *c {
                AffineCoord::Const(v) => AffineCoord::Const(v),
                AffineCoord::Var(i) => inner.coords[i - 1],
                AffineCoord::CoVar(i) => match inner.coords[i - 1] {
                    AffineCoord::Const(v) => AffineCoord::Const(1 - v),
                    AffineCoord::Var(j) => AffineCoord::CoVar(j),
                    AffineCoord::CoVar(j) => AffineCoord::Var(j),
                },
            })
            .collect();
        Some(AffineMap { dom: inner.dom, coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn fact(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn reversal_after_delta0_is_delta1() {
        let f = compose_cube(&CubeMor::reversal(), &CubeMor::face(0)).unwrap();
        assert_eq!(f, CubeMor::face(1));
        assert_eq!(f.entries(), &[Entry::Face(1)]);
    }

    #[test]
    fn reversal_is_an_involution() {
        let r = CubeMor::reversal();
        assert_eq!(compose_cube(&r, &r).unwrap(), CubeMor::identity(1));
    }

    #[test]
    fn identity_is_neutral() {
        for n in 0..=2 {
            for f in enumerate_hom(n, 2, HomMode::Symmetric) {
                assert_eq!(compose_cube(&CubeMor::identity(2), &f).unwrap(), f);
                assert_eq!(compose_cube(&f, &CubeMor::identity(n)).unwrap(), f);
            }
        }
    }

    #[test]
    fn composition_checks_shapes() {
        assert!(matches!(compose_cube(&CubeMor::reversal(), &CubeMor::identity(2)), Err(Error::Shape(_))));
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_cube(&CubeMor::face(0), &CubeMor::identity(1));
        assert_eq!(t.entries(), &[Entry::Face(0), Entry::axis(1, Sign::Pos)]);
        assert_eq!((t.dom(), t.cod()), (1, 2));
        let f = CubeMor::transposition();
        assert_eq!(tensor_cube(&CubeMor::identity(0), &f), f);
        let ff = tensor_cube(&CubeMor::face(0), &CubeMor::face(1));
        assert_eq!(ff.entries(), &[Entry::Face(0), Entry::Face(1)]);
        assert_eq!(ff.dom(), 0);
    }

    #[test]
    fn hom_sizes() {
        for m in 0..=3 {
            for n in 0..=m {
                assert_eq!(
                    enumerate_hom(n, m, HomMode::Symmetric).len(),
                    binom(m, n) * fact(n) * (1 << m)
                );
                assert_eq!(enumerate_hom(n, m, HomMode::Plain).len(), binom(m, n) * (1 << (m - n)));
            }
        }
        assert!(enumerate_hom(3, 2, HomMode::Symmetric).is_empty());
    }

    #[test]
    fn hom_zero_one_is_the_two_faces() {
        assert_eq!(enumerate_hom(0, 1, HomMode::Symmetric), vec![CubeMor::face(0), CubeMor::face(1)]);
        for n in 0..=3 {
            assert_eq!(enumerate_hom(n, n, HomMode::Plain), vec![CubeMor::identity(n)]);
        }
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        for m in 0..=3 {
            for n in 0..=m {
                let homs = enumerate_hom(n, m, HomMode::Symmetric);
                assert!(homs.windows(2).all(|w| w[0].entries() < w[1].entries()));
                for f in &homs {
                    assert!(CubeMor::new(f.dom(), f.entries().to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn flags() {
        assert!(CubeMor::face(0).is_r_image());
        assert!(CubeMor::face(1).is_plain() && !CubeMor::face(1).is_r_image());
        assert!(!CubeMor::reversal().is_plain());
        assert!(CubeMor::reversal().is_automorphism());
        assert!(!CubeMor::transposition().is_plain());
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_functor(&SimplexMor::bang(0)), CubeMor::face(0));
        for n in -1..=3 {
            assert_eq!(r_functor(&SimplexMor::identity(n)), CubeMor::identity((n + 1) as usize));
        }
        let k = SimplexMor::new(0, 1, vec![1]).unwrap();
        assert_eq!(r_functor(&k), tensor_cube(&CubeMor::face(0), &CubeMor::identity(1)));
    }

    #[test]
    fn r_is_monoidal_functor() {
        for a in -1..=1 {
            for b in a..=2 {
                for k1 in SimplexMor::enumerate(a, b) {
                    assert_eq!(r_preimage(&r_functor(&k1)), Some(k1.clone()));
                    for c in b..=2 {
                        for k2 in SimplexMor::enumerate(b, c) {
                            assert_eq!(
                                r_functor(&k2.after(&k1).unwrap()),
                                compose_cube(&r_functor(&k2), &r_functor(&k1)).unwrap()
                            );
                        }
                    }
                    for k2 in SimplexMor::enumerate(-1, 0) {
                        assert_eq!(r_functor(&k1.join(&k2)), tensor_cube(&r_functor(&k1), &r_functor(&k2)));
                    }
                }
            }
        }
    }

    #[test]
    fn factor_delta1() {
        let (w, k) = factor_surj(&CubeMor::face(1));
        assert_eq!(w, CubeMor::reversal());
        assert_eq!(k, SimplexMor::bang(0));
    }

    #[test]
    fn factor_r_image_is_trivial() {
        let k = SimplexMor::new(0, 2, vec![1]).unwrap();
        let (w, k2) = factor_surj(&r_functor(&k));
        assert!(w.is_identity());
        assert_eq!(k2, k);
    }

    #[test]
    fn factor_mixed_example() {
        let f = CubeMor::new(
            2,
            vec![Entry::axis(2, Sign::Neg), Entry::Face(1), Entry::axis(1, Sign::Pos)],
        )
        .unwrap();
        let (w, k) = factor_surj(&f);
        assert_eq!(
            w.entries(),
            &[Entry::axis(2, Sign::Neg), Entry::axis(3, Sign::Neg), Entry::axis(1, Sign::Pos)]
        );
        assert_eq!(k, SimplexMor::new(1, 2, vec![0, 1]).unwrap());
        let back = compose_cube(&w, &r_functor(&k)).unwrap();
        assert_eq!(back.semantics(), f.semantics());
    }

    #[test]
    fn automorphism_inverse() {
        for w in enumerate_hom(3, 3, HomMode::Symmetric) {
            let inv = w.inverse().unwrap();
            assert!(compose_cube(&w, &inv).unwrap().is_identity());
            assert!(compose_cube(&inv, &w).unwrap().is_identity());
        }
    }

    #[test]
    fn json_encoding() {
        let f = CubeMor::new(1, vec![Entry::Face(0), Entry::axis(1, Sign::Neg)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dom":1,"cod":2,"entries":[{"face":0},{"axis":1,"sign":-1}]}"#);
        let back: CubeMor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<CubeMor>(r#"{"dom":1,"cod":1,"entries":[{"face":0}]}"#).is_err());
        assert!(serde_json::from_str::<CubeMor>(r#"{"dom":0,"cod":1,"entries":[{"face":2}]}"#).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for f in enumerate_hom(1, 3, HomMode::Symmetric) {
            assert_eq!(CubeMor::parse_label(&f.label()).unwrap(), f);
        }
        assert_eq!(CubeMor::identity(0).label(), "0>0:");
        assert!(CubeMor::parse_label("1>1:+2").is_err());
    }
}
