//! Seeded generators of presheaves, frames and fibrations.
//!
//! Presheaves over a direct base are built object by object in degree order:
//! an element of `K(x)` is a matching family on `∂J^x` plus a tag, so every
//! finite presheaf arises this way.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::base::{ArrowId, BaseCategory, ObjId, Strictness};
use crate::error::{Error, Result};
use crate::matching::{Family, MatchingObject, RelativeMatching};
use crate::presheaf::{Presheaf, PresheafMap};

/// A presheaf filled in degree order; unfilled objects are empty.
struct Builder {
    base: Arc<BaseCategory>,
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl Builder {
    fn new(base: &Arc<BaseCategory>) -> Result<Builder> {
        if base.strictness() != Strictness::Direct {
            return Err(Error::NotDirect(base.name().to_string()));
        }
        Ok(Builder { base: base.clone(), sizes: vec![0; base.num_objects()], action: vec![Vec::new(); base.num_arrows()] })
    }

    fn current(&self) -> Presheaf {
        Presheaf::new_unchecked(self.base.clone(), self.sizes.clone(), self.action.clone())
    }

    /// Fills `x` with one element per listed family of `m`.
    fn fill(&mut self, x: ObjId, m: &MatchingObject, elements: &[usize]) {
        let base = self.base.clone();
        let mut slot: HashMap<ArrowId, (ObjId, usize)> = HashMap::new();
        for y in 0..base.num_objects() {
            for (i, &pos) in m.inclusion.components()[y].iter().enumerate() {
                slot.insert(base.hom(y, x)[pos], (y, i));
            }
        }
        self.sizes[x] = elements.len();
        for &f in base.incoming(x) {
            self.action[f] = if base.is_identity(f) {
                (0..elements.len()).collect()
            } else {
                let (y, i) = slot[&f];
                elements.iter().map(|&fam| m.families[fam][y][i]).collect()
            };
        }
    }

    fn finish(self) -> Result<Presheaf> {
        Presheaf::new(self.base, self.sizes, self.action)
    }
}

/// Random presheaf over a direct base with at most `max_per_level` elements
/// at each object.
pub fn random_presheaf(base: &Arc<BaseCategory>, rng: &mut impl Rng, max_per_level: usize) -> Result<Presheaf> {
    let mut b = Builder::new(base)?;
    for x in base.objects_by_degree() {
        let m = MatchingObject::compute(&b.current(), x)?;
        if m.size() == 0 {
            continue;
        }
        let n = rng.gen_range(0..=max_per_level);
        let elements: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m.size())).collect();
        b.fill(x, &m, &elements);
    }
    b.finish()
}

/// Bounds for random fibrant frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameParams {
    /// Largest `F(x)` at objects with empty boundary.
    pub base_max: usize,
    /// Largest padding factor: `F(x) = M_x F × P_x`.
    pub pad_max: usize,
}

impl Default for FrameParams {
    fn default() -> Self {
        FrameParams { base_max: 3, pad_max: 2 }
    }
}

/// Random Reedy fibrant frame: `F(x) = M_x F × P_x` with `P_x` nonempty.
pub fn random_fibrant(base: &Arc<BaseCategory>, rng: &mut impl Rng, params: FrameParams) -> Result<Presheaf> {
    let mut b = Builder::new(base)?;
    for x in base.objects_by_degree() {
        let m = MatchingObject::compute(&b.current(), x)?;
        let pad = if m.inclusion.source().is_empty() {
            rng.gen_range(1..=params.base_max.max(1))
        } else {
            rng.gen_range(1..=params.pad_max.max(1))
        };
        let elements: Vec<usize> = (0..m.size()).flat_map(|fam| std::iter::repeat_n(fam, pad)).collect();
        b.fill(x, &m, &elements);
    }
    b.finish()
}

/// Random Reedy fibration `q: F -> F'` onto a given frame: `F(x)` is the
/// relative matching pullback times a nonempty padding.
pub fn random_fibration_onto(target: &Presheaf, rng: &mut impl Rng, pad_max: usize) -> Result<PresheafMap> {
    let base = target.base().clone();
    let mut b = Builder::new(&base)?;
    let mut q: Vec<Vec<usize>> = vec![Vec::new(); base.num_objects()];
    for x in base.objects_by_degree() {
        let partial = b.current();
        let m = MatchingObject::compute(&partial, x)?;
        let m2 = MatchingObject::compute(target, x)?;
        // q restricted to objects filled so far.
        let qmap = PresheafMap::new_unchecked(partial.clone(), target.clone(), q.clone());
        let pad = rng.gen_range(1..=pad_max.max(1));
        let mut elements = Vec::new();
        let mut images = Vec::new();
        for (fam, family) in m.families.iter().enumerate() {
            let pushed = m.push(&qmap, family);
            let Some(m2i) = m2.index_of(&pushed) else { continue };
            for (e2, &mm) in m2.map.iter().enumerate() {
                if mm == m2i {
                    for _ in 0..pad {
                        elements.push(fam);
                        images.push(e2);
                    }
                }
            }
        }
        b.fill(x, &m, &elements);
        q[x] = images;
    }
    let source = b.finish()?;
    PresheafMap::new(source, target.clone(), q)
}

/// Relative matching maps of `q` at every object are surjective.
pub fn is_reedy_fibration(q: &PresheafMap) -> Result<bool> {
    for x in q.source().base().objects_by_degree() {
        if !RelativeMatching::compute(q, x)?.is_surjective() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (e, &v) in p.iter().enumerate() {
        inv[v] = e;
    }
    inv
}

/// A diagram with every structure map a bijection: `F(d) = [s]` transported
/// along random labellings `φ_d`, with `F(f) = φ_d ∘ φ_t^{-1}`.
pub fn bijective_diagram(base: &Arc<BaseCategory>, rng: &mut impl Rng, s: usize) -> Result<Presheaf> {
    let labels: Vec<Vec<usize>> = (0..base.num_objects()).map(|_| shuffled(s, rng)).collect();
    let inverse: Vec<Vec<usize>> = labels.iter().map(|p| invert(p)).collect();
    Presheaf::from_fn(base.clone(), vec![s; base.num_objects()], |f, e| labels[base.dom(f)][inverse[base.cod(f)][e]])
}

/// A random relabelling of `k`, with the isomorphism `k -> k'`.
pub fn relabel(k: &Presheaf, rng: &mut impl Rng) -> Result<PresheafMap> {
    let base = k.base();
    let perms: Vec<Vec<usize>> = (0..base.num_objects()).map(|x| shuffled(k.size(x), rng)).collect();
    let inverse: Vec<Vec<usize>> = perms.iter().map(|p| invert(p)).collect();
    let relabelled = Presheaf::from_fn(base.clone(), k.sizes().to_vec(), |f, e| {
        perms[base.dom(f)][k.act(f, inverse[base.cod(f)][e])]
    })?;
    PresheafMap::new(k.clone(), relabelled, perms)
}

/// Random subpresheaf: each element is picked with probability `p`, then
/// closed under the action.
pub fn random_subpresheaf(k: &Presheaf, rng: &mut impl Rng, p: f64) -> Result<PresheafMap> {
    let base = k.base();
    let mut gens = Vec::new();
    for x in 0..base.num_objects() {
        for e in 0..k.size(x) {
            if rng.gen_bool(p) {
                gens.push((x, e));
            }
        }
    }
    let keep = k.generated(&gens);
    Ok(k.subpresheaf(&keep)?.1)
}

/// Every subpresheaf of `k`, as inclusions, in a fixed order.
pub fn all_subpresheaves(k: &Presheaf) -> Result<Vec<PresheafMap>> {
    let base = k.base();
    let elements: Vec<(ObjId, usize)> =
        (0..base.num_objects()).flat_map(|x| (0..k.size(x)).map(move |e| (x, e))).collect();
    if elements.len() > 20 {
        return Err(Error::Shape(format!("{} elements is too many to enumerate subpresheaves", elements.len())));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << elements.len()) {
        let gens: Vec<_> = elements.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &g)| g).collect();
        let keep = k.generated(&gens);
        if seen.insert(keep.clone()) {
            out.push(k.subpresheaf(&keep)?.1);
        }
    }
    Ok(out)
}

/// A set of arrows generating the base under composition, with each
/// remaining arrow written as `g ∘ f` over earlier arrows.
fn generators(base: &BaseCategory) -> (Vec<ArrowId>, Vec<(ArrowId, ArrowId, ArrowId)>) {
    let mut order: Vec<ArrowId> = (0..base.num_arrows()).filter(|&a| !base.is_identity(a)).collect();
    let level = |x: ObjId| base.object(x).level;
    order.sort_by_key(|&a| (level(base.cod(a)) - level(base.dom(a)), a));
    let mut reached: HashSet<ArrowId> = (0..base.num_objects()).map(|x| base.identity(x)).collect();
    let mut gens = Vec::new();
    let mut derived = Vec::new();
    for &a in &order {
        if reached.contains(&a) {
            continue;
        }
        gens.push(a);
        reached.insert(a);
        loop {
            let mut new = Vec::new();
            let list: Vec<ArrowId> = reached.iter().copied().sorted().collect();
            for &g in &list {
                for &f in &list {
                    if let Some(gf) = base.try_compose(g, f) {
                        if !reached.contains(&gf) && !new.iter().any(|&(_, _, h)| h == gf) {
                            new.push((g, f, gf));
                        }
                    }
                }
            }
            if new.is_empty() {
                break;
            }
            for t in new {
                reached.insert(t.2);
                derived.push(t);
            }
        }
    }
    (gens, derived)
}

/// Every presheaf with at most `max_size` elements at each object, one per
/// isomorphism class.
pub fn enumerate_presheaves(base: &Arc<BaseCategory>, max_size: usize) -> Result<Vec<Presheaf>> {
    let (gens, derived) = generators(base);
    let n = base.num_objects();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for sizes in (0..n).map(|_| 0..=max_size).multi_cartesian_product() {
        let choices: Vec<Vec<Vec<usize>>> = gens
            .iter()
            .map(|&g| {
                let (d, c) = (sizes[base.dom(g)], sizes[base.cod(g)]);
                (0..c).map(|_| 0..d).multi_cartesian_product().collect()
            })
            .collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        for pick in choices.iter().map(|c| 0..c.len()).multi_cartesian_product() {
            let mut action: Vec<Option<Vec<usize>>> = vec![None; base.num_arrows()];
            for x in 0..n {
                action[base.identity(x)] = Some((0..sizes[x]).collect());
            }
            for (gi, &g) in gens.iter().enumerate() {
                action[g] = Some(choices[gi][pick[gi]].clone());
            }
            for &(g, f, gf) in &derived {
                let (ag, af) = (action[g].as_ref().unwrap(), action[f].as_ref().unwrap());
                action[gf] = Some(ag.iter().map(|&e| af[e]).collect());
            }
            let action: Vec<Vec<usize>> = action.into_iter().map(Option::unwrap).collect();
            let Ok(k) = Presheaf::new(base.clone(), sizes.clone(), action) else { continue };
            if seen.insert(canonical_form(&k)) {
                out.push(k);
            }
        }
    }
    Ok(out)
}

/// Lexicographically least action table over all relabellings.
fn canonical_form(k: &Presheaf) -> Vec<Vec<usize>> {
    let base = k.base();
    let perms: Vec<Vec<Vec<usize>>> =
        (0..base.num_objects()).map(|x| (0..k.size(x)).permutations(k.size(x)).collect()).collect();
    let mut best: Option<Vec<Vec<usize>>> = None;
    for pick in perms.iter().map(|p| 0..p.len()).multi_cartesian_product() {
        let perm = |x: ObjId| &perms[x][pick[x]];
        let mut table = vec![k.sizes().to_vec()];
        for f in 0..base.num_arrows() {
            let (x, y) = (base.dom(f), base.cod(f));
            let mut row = vec![0; k.size(y)];
            for e in 0..k.size(y) {
                row[perm(y)[e]] = perm(x)[k.act(f, e)];
            }
            table.push(row);
        }
        if best.as_ref().is_none_or(|b| table < *b) {
            best = Some(table);
        }
    }
    best.unwrap_or_default()
}

/// `r ↦ S^{Hom(a, r)}`, functions encoded in base `s` over hom positions.
pub fn coinduced(base: &Arc<BaseCategory>, a: ObjId, s: usize) -> Result<Presheaf> {
    let sizes: Vec<usize> = (0..base.num_objects()).map(|r| s.pow(base.hom(a, r).len() as u32)).collect();
    Presheaf::from_fn(base.clone(), sizes, |f, phi| {
        let (r2, r) = (base.dom(f), base.cod(f));
        let digits = decode(phi, s, base.hom(a, r).len());
        let out: Vec<usize> = base.hom(a, r2).iter().map(|&h| digits[base.hom_position(base.compose(f, h))]).collect();
        encode(&out, s)
    })
}

/// `S^{Hom(a, -)} -> S'^{Hom(a, -)}` given by postcomposition with `sigma`.
pub fn coinduced_map(base: &Arc<BaseCategory>, a: ObjId, s: usize, sigma: &[usize], s2: usize) -> Result<PresheafMap> {
    let source = coinduced(base, a, s)?;
    let target = coinduced(base, a, s2)?;
    let components = (0..base.num_objects())
        .map(|r| {
            let len = base.hom(a, r).len();
            (0..source.size(r))
                .map(|phi| encode(&decode(phi, s, len).iter().map(|&d| sigma[d]).collect::<Vec<_>>(), s2))
                .collect()
        })
        .collect();
    PresheafMap::new(source, target, components)
}

fn decode(mut v: usize, s: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = v % s.max(1);
            v /= s.max(1);
            d
        })
        .collect()
}

fn encode(digits: &[usize], s: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * s + d)
}

/// Families of a matching object, for callers that build frames by hand.
pub fn matching_families(k: &Presheaf, x: ObjId) -> Result<Vec<Family>> {
    Ok(MatchingObject::compute(k, x)?.families)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;
    use crate::matching::is_fibrant;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_frames_are_fibrant() {
        let base = cube_base(HomMode::Plain, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let f = random_fibrant(&base, &mut rng, FrameParams { base_max: 2, pad_max: 2 }).unwrap();
            assert!(is_fibrant(&f).unwrap());
            let q = random_fibration_onto(&f, &mut rng, 2).unwrap();
            assert!(is_reedy_fibration(&q).unwrap());
            assert!(is_fibrant(q.source()).unwrap());
            assert!(q.is_epi());
        }
    }

    #[test]
    fn relabel_is_iso() {
        let base = cube_base(HomMode::Plain, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = random_presheaf(&base, &mut rng, 4).unwrap();
        assert!(relabel(&k, &mut rng).unwrap().is_iso());
    }

    #[test]
    fn subpresheaves_of_interval() {
        let base = cube_base(HomMode::Plain, 1);
        let j = Presheaf::representable(&base, 1).unwrap();
        // ∅, {0}, {1}, {0,1}, J^1
        assert_eq!(all_subpresheaves(&j).unwrap().len(), 5);
    }

    #[test]
    fn presheaves_on_one_object() {
        let base = cube_base(HomMode::Plain, 0);
        assert_eq!(enumerate_presheaves(&base, 2).unwrap().len(), 3);
        let base = cube_base(HomMode::Symmetric, 1);
        let all = enumerate_presheaves(&base, 1).unwrap();
        // X0, X1 of size ≤ 1: (0,0), (1,0), (1,1).
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn coinduced_is_a_presheaf() {
        let base = cube_base(HomMode::Symmetric, 2);
        let f = coinduced(&base, 1, 2).unwrap();
        assert_eq!(f.sizes(), &[1, 4, 256]);
        let q = coinduced_map(&base, 0, 3, &[0, 1, 1], 2).unwrap();
        assert!(q.is_epi());
    }
}
