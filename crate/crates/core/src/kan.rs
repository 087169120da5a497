//! Left and right Kan extensions of finite presheaves along a functor, and
//! the coend quotient they share with Day convolution.

use std::collections::HashMap;
use std::sync::Arc;

use crate::base::{same_base, ArrowId, BaseCategory, Functor, ObjId};
use crate::error::{Error, Result};
use crate::nat::NatSearch;
use crate::presheaf::{Presheaf, PresheafMap, UnionFind};

/// A diagram of finite sets indexed by "sources", each sitting over an object
/// of the target base. The coend glues `(s, a, u: c -> t(s))` along the arrows.
pub(crate) struct CoendDiagram {
    /// Target object and element count of each source.
    pub sources: Vec<(ObjId, usize)>,
    pub arrows: Vec<CoendArrow>,
}

pub(crate) struct CoendArrow {
    pub dom: usize,
    pub cod: usize,
    /// Image arrow `t(dom) -> t(cod)` in the target base.
    pub image: ArrowId,
    /// Elements of `cod` to elements of `dom`.
    pub act: Vec<usize>,
}

/// A coend element representative: source, element, arrow `c -> t(source)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub source: usize,
    pub element: usize,
    pub arrow: ArrowId,
}

pub(crate) struct Coend {
    pub presheaf: Presheaf,
    /// `reps[c][class]` is the first triple of the class.
    pub reps: Vec<Vec<Triple>>,
    offsets: Vec<Vec<usize>>,
    class_of: Vec<Vec<usize>>,
}

impl Coend {
    pub fn class(&self, base: &BaseCategory, c: ObjId, t: Triple) -> usize {
        let cod = base.cod(t.arrow);
        let width = base.hom(c, cod).len();
        self.class_of[c][self.offsets[c][t.source] + t.element * width + base.hom_position(t.arrow)]
    }
}

pub(crate) fn coend(target: &Arc<BaseCategory>, diagram: &CoendDiagram) -> Result<Coend> {
    let n = target.num_objects();
    let mut offsets = vec![Vec::with_capacity(diagram.sources.len()); n];
    let mut class_of = Vec::with_capacity(n);
    let mut reps = Vec::with_capacity(n);
    for c in 0..n {
        let mut total = 0;
        for &(t, size) in &diagram.sources {
            offsets[c].push(total);
            total += size * target.hom(c, t).len();
        }
        let mut uf = UnionFind::new(total);
        for h in &diagram.arrows {
            let (td, tc) = (diagram.sources[h.dom].0, diagram.sources[h.cod].0);
            let (wd, wc) = (target.hom(c, td).len(), target.hom(c, tc).len());
            for (a, &a2) in h.act.iter().enumerate() {
                for (pos, &u) in target.hom(c, td).iter().enumerate() {
                    let lhs = offsets[c][h.cod] + a * wc + target.hom_position(target.compose(h.image, u));
                    let rhs = offsets[c][h.dom] + a2 * wd + pos;
                    uf.union(lhs, rhs);
                }
            }
        }
        let (classes, count) = uf.classes();
        let mut r = vec![None; count];
        for (s, &(t, size)) in diagram.sources.iter().enumerate() {
            let w = target.hom(c, t).len();
            for a in 0..size {
                for (pos, &u) in target.hom(c, t).iter().enumerate() {
                    let k = classes[offsets[c][s] + a * w + pos];
                    if r[k].is_none() {
                        r[k] = Some(Triple { source: s, element: a, arrow: u });
                    }
                }
            }
        }
        reps.push(r.into_iter().map(|t| t.expect("every class has a member")).collect::<Vec<_>>());
        class_of.push(classes);
    }
    let sizes: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut co = Coend { presheaf: Presheaf::empty(target.clone()), reps, offsets, class_of };
    let mut action = Vec::with_capacity(target.num_arrows());
    for k in 0..target.num_arrows() {
        let (c2, c) = (target.dom(k), target.cod(k));
        let mut row = Vec::with_capacity(sizes[c]);
        for cls in 0..sizes[c] {
            let t = co.reps[c][cls];
            row.push(co.class(target, c2, Triple { arrow: target.compose(t.arrow, k), ..t }));
        }
        action.push(row);
    }
    let presheaf = Presheaf::new(target.clone(), sizes, action)?;
    // Well-definedness: every member of a class must act into the same class.
    for k in 0..target.num_arrows() {
        let (c2, c) = (target.dom(k), target.cod(k));
        for (s, &(t, size)) in diagram.sources.iter().enumerate() {
            for a in 0..size {
                for &u in target.hom(c, t) {
                    let tr = Triple { source: s, element: a, arrow: u };
                    let moved = Triple { arrow: target.compose(u, k), ..tr };
                    if presheaf.act(k, co.class(target, c, tr)) != co.class(target, c2, moved) {
                        return Err(Error::InvalidPresheaf("coend action is not well defined".into()));
                    }
                }
            }
        }
    }
    co.presheaf = presheaf;
    Ok(co)
}

/// `p^*K`.
pub fn restrict(p: &Functor, k: &Presheaf) -> Result<Presheaf> {
    k.restrict(p)
}

/// `p_! K`, with each class represented by `(d, x, g: r -> p d)`.
pub struct Lan {
    pub presheaf: Presheaf,
    coend: Coend,
}

impl Lan {
    /// The class of `(d, x, g)` at `r = dom g`.
    pub fn class(&self, d: ObjId, x: usize, g: ArrowId) -> usize {
        let base = self.presheaf.base();
        self.coend.class(base, base.dom(g), Triple { source: d, element: x, arrow: g })
    }

    /// Representative `(d, x, g)` of a class at `r`.
    pub fn rep(&self, r: ObjId, class: usize) -> (ObjId, usize, ArrowId) {
        let t = self.coend.reps[r][class];
        (t.source, t.element, t.arrow)
    }
}

pub fn lan(p: &Functor, k: &Presheaf) -> Result<Lan> {
    if !same_base(&p.source, k.base()) {
        return Err(Error::BaseMismatch("left Kan extension of a presheaf over another base".into()));
    }
    let src = &p.source;
    let diagram = CoendDiagram {
        sources: (0..src.num_objects()).map(|d| (p.obj(d), k.size(d))).collect(),
        arrows: (0..src.num_arrows())
            .filter(|&h| !src.is_identity(h))
            .map(|h| CoendArrow {
                dom: src.dom(h),
                cod: src.cod(h),
                image: p.arrow(h),
                act: k.action(h).to_vec(),
            })
            .collect(),
    };
    let coend = coend(&p.target, &diagram)?;
    Ok(Lan { presheaf: coend.presheaf.clone(), coend })
}

/// `p_! α` for `α: K -> L`.
pub fn lan_map(p: &Functor, alpha: &PresheafMap) -> Result<PresheafMap> {
    let (lk, ll) = (lan(p, alpha.source())?, lan(p, alpha.target())?);
    let target = p.target.clone();
    let components = (0..target.num_objects())
        .map(|r| {
            (0..lk.presheaf.size(r))
                .map(|c| {
                    let (d, x, g) = lk.rep(r, c);
                    ll.class(d, alpha.at(d, x), g)
                })
                .collect()
        })
        .collect();
    PresheafMap::new(lk.presheaf, ll.presheaf, components)
}

/// Unit `K -> p^* p_! K`, `x ↦ [d, x, id]`.
pub fn lan_unit(p: &Functor, k: &Presheaf) -> Result<PresheafMap> {
    let l = lan(p, k)?;
    let components = (0..p.source.num_objects())
        .map(|d| (0..k.size(d)).map(|x| l.class(d, x, p.target.identity(p.obj(d)))).collect())
        .collect();
    PresheafMap::new(k.clone(), l.presheaf.restrict(p)?, components)
}

/// Counit `p_! p^* X -> X`, `[d, x, g] ↦ X(g) x`.
pub fn lan_counit(p: &Functor, x: &Presheaf) -> Result<PresheafMap> {
    let l = lan(p, &x.restrict(p)?)?;
    let components = (0..p.target.num_objects())
        .map(|r| {
            (0..l.presheaf.size(r))
                .map(|c| {
                    let (_, e, g) = l.rep(r, c);
                    x.act(g, e)
                })
                .collect()
        })
        .collect();
    PresheafMap::new(l.presheaf, x.clone(), components)
}

/// `p_* K`: at `r`, the natural maps `p^* R^r -> K`, in search order.
pub struct Ran {
    pub presheaf: Presheaf,
    /// `families[r][i]` is the component table of the `i`-th map.
    pub families: Vec<Vec<Vec<Vec<usize>>>>,
}

pub fn ran(p: &Functor, k: &Presheaf) -> Result<Ran> {
    if !same_base(&p.source, k.base()) {
        return Err(Error::BaseMismatch("right Kan extension of a presheaf over another base".into()));
    }
    let target = &p.target;
    let mut families = Vec::with_capacity(target.num_objects());
    let mut reps = Vec::with_capacity(target.num_objects());
    let mut index: Vec<HashMap<Vec<Vec<usize>>, usize>> = Vec::with_capacity(target.num_objects());
    for r in 0..target.num_objects() {
        let yr = Presheaf::representable(target, r)?.restrict(p)?;
        let all = NatSearch::new(&yr, k)?.all();
        index.push(all.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect());
        families.push(all);
        reps.push(yr);
    }
    let sizes = families.iter().map(Vec::len).collect();
    let mut action = Vec::with_capacity(target.num_arrows());
    for h in 0..target.num_arrows() {
        let (r2, r) = (target.dom(h), target.cod(h));
        // α ↦ α ∘ p^*(h ∘ -); at d the element g: p d -> r2 goes to h ∘ g.
        let row = families[r]
            .iter()
            .map(|alpha| {
                let moved: Vec<Vec<usize>> = (0..p.source.num_objects())
                    .map(|d| {
                        target
                            .hom(p.obj(d), r2)
                            .iter()
                            .map(|&g| alpha[d][target.hom_position(target.compose(h, g))])
                            .collect()
                    })
                    .collect();
                index[r2][&moved]
            })
            .collect();
        action.push(row);
    }
    let presheaf = Presheaf::new(target.clone(), sizes, action)?;
    Ok(Ran { presheaf, families })
}

/// Counit `p^* p_* K -> K`, evaluating a family at the identity.
pub fn ran_counit(p: &Functor, k: &Presheaf) -> Result<PresheafMap> {
    let rk = ran(p, k)?;
    let target = &p.target;
    let components = (0..p.source.num_objects())
        .map(|d| {
            let r = p.obj(d);
            let id_pos = target.hom_position(target.identity(r));
            rk.families[r].iter().map(|alpha| alpha[d][id_pos]).collect()
        })
        .collect();
    PresheafMap::new(rk.presheaf.restrict(p)?, k.clone(), components)
}

/// Unit `X -> p_* p^* X`, `e ↦ (g ↦ X(g) e)`.
pub fn ran_unit(p: &Functor, x: &Presheaf) -> Result<PresheafMap> {
    let px = x.restrict(p)?;
    let rk = ran(p, &px)?;
    let target = &p.target;
    let mut components = Vec::with_capacity(target.num_objects());
    for r in 0..target.num_objects() {
        let index: HashMap<&Vec<Vec<usize>>, usize> =
            rk.families[r].iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut comp = Vec::with_capacity(x.size(r));
        for e in 0..x.size(r) {
            let family: Vec<Vec<usize>> = (0..p.source.num_objects())
                .map(|d| target.hom(p.obj(d), r).iter().map(|&g| x.act(g, e)).collect())
                .collect();
            comp.push(*index.get(&family).ok_or_else(|| Error::InvalidPresheaf("unit family is not natural".into()))?);
        }
        components.push(comp);
    }
    PresheafMap::new(x.clone(), rk.presheaf, components)
}

/// Result of checking the adjunctions `p_! ⊣ p^* ⊣ p_*` on given inputs.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct AdjunctionReport {
    pub lan_triangles: bool,
    pub ran_triangles: bool,
    pub lan_hom_bijection: bool,
    pub ran_hom_bijection: bool,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.lan_triangles && self.ran_triangles && self.lan_hom_bijection && self.ran_hom_bijection
    }
}

/// Triangle identities and hom-set bijections for `K` over the source and
/// `X` over the target.
pub fn check_adjunctions(p: &Functor, k: &Presheaf, x: &Presheaf) -> Result<AdjunctionReport> {
    let mut report = AdjunctionReport::default();
    // p_! ⊣ p^*: ε_{p_!K} ∘ p_!(η_K) = id and p^*(ε_X) ∘ η_{p^*X} = id.
    let eta = lan_unit(p, k)?;
    let lk = lan(p, k)?.presheaf;
    let first = lan_counit(p, &lk)?.after(&lan_map(p, &eta)?)?;
    let px = x.restrict(p)?;
    let second = lan_counit(p, x)?.restrict(p)?.after(&lan_unit(p, &px)?)?;
    report.lan_triangles = first.components() == PresheafMap::identity(&lk).components()
        && second.components() == PresheafMap::identity(&px).components();
    // Nat(p_!K, X) -> Nat(K, p^*X), β ↦ p^*β ∘ η, must be a bijection.
    let lhs = crate::nat::nat_set(&lk, x)?;
    let mut images: Vec<Vec<Vec<usize>>> = lhs
        .iter()
        .map(|b| Ok(b.restrict(p)?.after(&eta)?.components().to_vec()))
        .collect::<Result<_>>()?;
    let rhs = crate::nat::count_nat(k, &px)?;
    images.sort();
    images.dedup();
    report.lan_hom_bijection = images.len() == lhs.len() && lhs.len() == rhs;
    // p^* ⊣ p_*: Nat(X, p_*K) -> Nat(p^*X, K), β ↦ ε_K ∘ p^*β, and the
    // triangle p_*(ε_K) ∘ η_{p_*K} = id.
    let rk = ran(p, k)?;
    let counit = ran_counit(p, k)?;
    let lhs = crate::nat::nat_set(x, &rk.presheaf)?;
    let mut images: Vec<Vec<Vec<usize>>> = lhs
        .iter()
        .map(|b| Ok(counit.after(&b.restrict(p)?)?.components().to_vec()))
        .collect::<Result<_>>()?;
    let rhs = crate::nat::count_nat(&px, k)?;
    images.sort();
    images.dedup();
    report.ran_hom_bijection = images.len() == lhs.len() && lhs.len() == rhs;
    let unit_rk = ran_unit(p, &rk.presheaf)?;
    let pushed = ran_map(p, &counit)?;
    let tri = pushed.after(&unit_rk)?;
    report.ran_triangles = tri.components() == PresheafMap::identity(&rk.presheaf).components()
        && ran_second_triangle(p, x)?;
    Ok(report)
}

/// `ε_{p^*X} ∘ p^*(η_X) = id_{p^*X}`.
fn ran_second_triangle(p: &Functor, x: &Presheaf) -> Result<bool> {
    let px = x.restrict(p)?;
    let composite = ran_counit(p, &px)?.after(&ran_unit(p, x)?.restrict(p)?)?;
    Ok(composite.components() == PresheafMap::identity(&px).components())
}

/// `p_* α` for `α: K -> L`, by postcomposition of families.
pub fn ran_map(p: &Functor, alpha: &PresheafMap) -> Result<PresheafMap> {
    let (rk, rl) = (ran(p, alpha.source())?, ran(p, alpha.target())?);
    let target = &p.target;
    let mut components = Vec::with_capacity(target.num_objects());
    for r in 0..target.num_objects() {
        let index: HashMap<&Vec<Vec<usize>>, usize> =
            rl.families[r].iter().enumerate().map(|(i, c)| (c, i)).collect();
        let comp = rk.families[r]
            .iter()
            .map(|fam| {
                let moved: Vec<Vec<usize>> = fam
                    .iter()
                    .enumerate()
                    .map(|(d, row)| row.iter().map(|&e| alpha.at(d, e)).collect())
                    .collect();
                index[&moved]
            })
            .collect();
        components.push(comp);
    }
    PresheafMap::new(rk.presheaf, rl.presheaf, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{cube_base, simplex_base};
    use crate::cube::{r_functor, HomMode};
    use crate::simplex::SimplexMor;

    /// `r` as a functor from the augmented semi-simplex category into plain cubes.
    fn r_as_functor(max_deg: usize) -> Functor {
        let s = simplex_base(max_deg);
        let c = cube_base(HomMode::Plain, max_deg);
        let objects = (0..s.num_objects()).collect();
        let arrows = (0..s.num_arrows())
            .map(|a| {
                let lab = &s.arrow(a).label;
                let k = parse_simplex(lab);
                crate::base::cube_arrow(&c, &r_functor(&k)).unwrap()
            })
            .collect();
        Functor::new(s, c, objects, arrows).unwrap()
    }

    fn parse_simplex(label: &str) -> SimplexMor {
        let (head, body) = label.split_once('{').unwrap();
        let (a, b) = head.split_once("->").unwrap();
        let a: isize = a.trim_matches(|c| c == '[' || c == ']').parse().unwrap();
        let b: isize = b.trim_matches(|c| c == '[' || c == ']').parse().unwrap();
        let image = body.trim_end_matches('}').split(',').filter(|t| !t.is_empty()).map(|t| t.parse().unwrap()).collect();
        SimplexMor::new(a, b, image).unwrap()
    }

    #[test]
    fn lan_of_representable_is_representable() {
        let p = r_as_functor(2);
        p.validate().unwrap();
        for d in 0..p.source.num_objects() {
            let rep = Presheaf::representable(&p.source, d).unwrap();
            let l = lan(&p, &rep).unwrap();
            let target = Presheaf::representable(&p.target, p.obj(d)).unwrap();
            assert_eq!(l.presheaf.sizes(), target.sizes());
        }
    }

    #[test]
    fn ran_of_singleton_is_singleton() {
        let p = r_as_functor(2);
        let r = ran(&p, &Presheaf::terminal(p.source.clone())).unwrap();
        assert!(r.presheaf.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn adjunctions_on_small_inputs() {
        let p = r_as_functor(2);
        let k = Presheaf::representable(&p.source, 1).unwrap();
        let (x, _) = Presheaf::boundary(&p.target, 2).unwrap();
        let report = check_adjunctions(&p, &k, &x).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
