//! The set tribe: nonempty finite sets, surjections as fibrations, injections
//! as anodyne maps. Frames, cotensors, gap maps and cone extension are
//! computed by cell induction and compared with brute-force `Nat` sets.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::base::{BaseCategory, Functor, ObjId};
use crate::day::{day_map, day_product, DayWarning};
use crate::dr::DrCategory;
use crate::error::{Error, Result};
use crate::generate::is_reedy_fibration;
use crate::kan::ran;
use crate::matching::{Family, MatchingObject};
use crate::nat::NatSearch;
use crate::presheaf::{check_same, Presheaf, PresheafMap};
use crate::skeleton::{cell_decompose_mono, skeletal_filtration};

/// Surjectivity witness of one matching map.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingWitness {
    pub object: ObjId,
    pub matching_size: usize,
    /// Smallest preimage of each matching family.
    pub section: Vec<usize>,
}

/// A Reedy fibrant diagram together with its fibrancy certificate.
#[derive(Clone, Debug)]
pub struct SetFrame {
    pub diagram: Presheaf,
    pub certificate: Vec<MatchingWitness>,
}

impl SetFrame {
    pub fn new(diagram: Presheaf) -> Result<SetFrame> {
        let base = diagram.base().clone();
        let mut certificate = Vec::with_capacity(base.num_objects());
        for x in base.objects_by_degree() {
            let label = &base.object(x).label;
            if diagram.size(x) == 0 {
                return Err(Error::NotFibrant(format!("empty at {label}")));
            }
            let m = MatchingObject::compute(&diagram, x)?;
            let mut section = vec![usize::MAX; m.size()];
            for (e, &fam) in m.map.iter().enumerate().rev() {
                section[fam] = e;
            }
            if let Some(fam) = section.iter().position(|&e| e == usize::MAX) {
                return Err(Error::NotFibrant(format!("matching family {fam} at {label} has no preimage")));
            }
            certificate.push(MatchingWitness { object: x, matching_size: m.size(), section });
        }
        certificate.sort_by_key(|w| w.object);
        Ok(SetFrame { diagram, certificate })
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        self.diagram.base()
    }
}

/// `M_x F` and the matching map `F(x) -> M_x F`.
pub fn matching_object(f: &SetFrame, x: ObjId) -> Result<MatchingObject> {
    MatchingObject::compute(&f.diagram, x)
}

#[derive(Clone, Debug)]
pub struct FrameMap {
    pub map: PresheafMap,
    pub levelwise_surjective: bool,
    pub levelwise_bijective: bool,
    pub reedy_fibration: bool,
    pub anodyne: bool,
}

impl FrameMap {
    pub fn classify(map: PresheafMap) -> Result<FrameMap> {
        let reedy_fibration = is_reedy_fibration(&map)?;
        let levelwise_surjective = map.is_epi();
        if reedy_fibration && !levelwise_surjective {
            return Err(Error::ModelViolation("Reedy fibration that is not levelwise surjective".into()));
        }
        Ok(FrameMap {
            levelwise_bijective: map.is_iso(),
            anodyne: map.is_mono(),
            levelwise_surjective,
            reedy_fibration,
            map,
        })
    }
}

/// `F^K` computed by induction over the skeletal filtration of `K`, with its
/// bijection onto `Nat(K, F)`.
#[derive(Clone, Debug)]
pub struct Cotensor {
    /// Each element as the natural map `K -> F` it represents.
    pub elements: Vec<Family>,
    /// Size of each stage `F^{X_n}`.
    pub stage_sizes: Vec<usize>,
    /// Index in `nat_set(K, F)` order of each element.
    pub to_nat: Vec<usize>,
    pub nat_size: usize,
}

impl Cotensor {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn is_bijection(&self) -> bool {
        let mut hit = vec![false; self.nat_size];
        for &i in &self.to_nat {
            if i >= self.nat_size || hit[i] {
                return false;
            }
            hit[i] = true;
        }
        self.to_nat.len() == self.nat_size
    }
}

pub fn cotensor_skeletal(f: &SetFrame, k: &Presheaf) -> Result<Cotensor> {
    check_same(&f.diagram, k)?;
    let base = k.base().clone();
    let n = base.num_objects();
    let dec = skeletal_filtration(k)?;
    let mut matching: HashMap<ObjId, MatchingObject> = HashMap::new();
    let mut fibers: HashMap<ObjId, Vec<Vec<usize>>> = HashMap::new();
    // Elements of the current stage as maps X_n -> F.
    let mut current: Vec<Family> = vec![vec![Vec::new(); n]];
    let mut stage_sizes = vec![1];
    for stage in &dec.stages {
        for c in &stage.cells {
            if !matching.contains_key(&c.object) {
                let m = matching_object(f, c.object)?;
                let mut fib = vec![Vec::new(); m.size()];
                for (e, &fam) in m.map.iter().enumerate() {
                    fib[fam].push(e);
                }
                fibers.insert(c.object, fib);
                matching.insert(c.object, m);
            }
        }
        // Offsets of each cell's boundary and disc inside the coproducts.
        let mut d_off = vec![vec![0; n]; stage.cells.len() + 1];
        let mut j_off = vec![vec![0; n]; stage.cells.len() + 1];
        for (ci, c) in stage.cells.iter().enumerate() {
            let m = &matching[&c.object];
            for y in 0..n {
                d_off[ci + 1][y] = d_off[ci][y] + m.boundary.size(y);
                j_off[ci + 1][y] = j_off[ci][y] + base.hom(y, c.object).len();
            }
        }
        let next = stage.inclusion.target();
        // Where each element of X_next comes from.
        #[derive(Clone, Copy)]
        enum Source {
            Prev(usize),
            Cell(usize, usize),
        }
        let mut source: Vec<Vec<Option<Source>>> = (0..n).map(|y| vec![None; next.size(y)]).collect();
        for (ci, c) in stage.cells.iter().enumerate() {
            for y in 0..n {
                for pos in 0..base.hom(y, c.object).len() {
                    source[y][stage.characteristic.at(y, j_off[ci][y] + pos)] = Some(Source::Cell(ci, pos));
                }
            }
        }
        for y in 0..n {
            for (a, &p) in stage.inclusion.components()[y].iter().enumerate() {
                source[y][p] = Some(Source::Prev(a));
            }
        }
        let mut out = Vec::new();
        for alpha in &current {
            // The pullback fiber over α is the product of the cell fibers.
            let mut choices = Vec::with_capacity(stage.cells.len());
            for (ci, c) in stage.cells.iter().enumerate() {
                let m = &matching[&c.object];
                let fam: Family = (0..n)
                    .map(|y| {
                        (0..m.boundary.size(y))
                            .map(|i| alpha[y][stage.attaching.at(y, d_off[ci][y] + i)])
                            .collect()
                    })
                    .collect();
                let idx = m
                    .index_of(&fam)
                    .ok_or_else(|| Error::InvalidPresheaf("attaching family is not natural".into()))?;
                let fib = &fibers[&c.object][idx];
                if fib.is_empty() {
                    return Err(Error::NotFibrant(format!(
                        "matching map at {} is not surjective",
                        base.object(c.object).label
                    )));
                }
                choices.push(fib.clone());
            }
            for pick in product_indices(&choices) {
                let beta: Family = (0..n)
                    .map(|y| {
                        source[y]
                            .iter()
                            .map(|s| match s.expect("pushout element has a source") {
                                Source::Prev(a) => alpha[y][a],
                                Source::Cell(ci, pos) => {
                                    let cell = stage.cells[ci];
                                    f.diagram.act(base.hom(y, cell.object)[pos], choices[ci][pick[ci]])
                                }
                            })
                            .collect()
                    })
                    .collect();
                out.push(beta);
            }
        }
        current = out;
        stage_sizes.push(current.len());
    }
    // Transport through X_s ≅ K.
    let back = dec.reconstruction.inverse()?;
    let elements: Vec<Family> = current
        .iter()
        .map(|alpha| (0..n).map(|y| back.components()[y].iter().map(|&p| alpha[y][p]).collect()).collect())
        .collect();
    let nat = NatSearch::new(k, &f.diagram)?.all();
    let index: HashMap<&Family, usize> = nat.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let to_nat = elements.iter().map(|e| index.get(e).copied().unwrap_or(usize::MAX)).collect();
    Ok(Cotensor { elements, stage_sizes, to_nat, nat_size: nat.len() })
}

/// All index tuples of a product of nonempty lists, last coordinate fastest.
fn product_indices(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..c.len()).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

/// `F^K -> F'^K` induced by `q`, as a map on `Nat` sets.
#[derive(Clone, Debug, Serialize)]
pub struct InducedMap {
    pub source_size: usize,
    pub target_size: usize,
    pub surjective: bool,
    pub injective: bool,
}

pub fn induced_on_cotensor(q: &PresheafMap, k: &Presheaf) -> Result<InducedMap> {
    let src = NatSearch::new(k, q.source())?.all();
    let tgt = NatSearch::new(k, q.target())?.all();
    let index: HashMap<&Family, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut hits = vec![0usize; tgt.len()];
    for alpha in &src {
        let pushed = push(q, alpha);
        hits[index[&pushed]] += 1;
    }
    Ok(InducedMap {
        source_size: src.len(),
        target_size: tgt.len(),
        surjective: hits.iter().all(|&h| h > 0),
        injective: hits.iter().all(|&h| h <= 1),
    })
}

fn push(q: &PresheafMap, alpha: &Family) -> Family {
    alpha.iter().enumerate().map(|(y, row)| row.iter().map(|&e| q.at(y, e)).collect()).collect()
}

/// One peeling step `F'^L ×_{F'^{L_j}} F^{L_j} -> F'^L ×_{F'^{L_{j-1}}} F^{L_{j-1}}`.
#[derive(Clone, Debug, Serialize)]
pub struct GapStep {
    pub object: String,
    pub element: usize,
    pub source_size: usize,
    pub target_size: usize,
    pub surjective: bool,
    /// Fibers agree with those of the relative matching map at the cell.
    pub base_change: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub domain_size: usize,
    pub codomain_size: usize,
    pub surjective: bool,
    pub injective: bool,
    /// The composite of the peeling steps equals the direct gap map.
    pub factorization_agrees: bool,
    /// `q` is levelwise bijective, so the gap map must be a bijection.
    pub expect_bijective: bool,
    pub steps: Vec<GapStep>,
}

impl GapReport {
    pub fn passed(&self) -> bool {
        self.surjective
            && self.factorization_agrees
            && self.steps.iter().all(|s| s.surjective && s.base_change)
            && (!self.expect_bijective || self.injective)
    }
}

/// Elements of `L` outside `mask`, written as partial maps `L -> F` with
/// `usize::MAX` off the mask.
fn partial_maps(l: &Presheaf, mask: &[Vec<bool>], f: &Presheaf) -> Result<Vec<Family>> {
    let (sub, inc) = l.subpresheaf(mask)?;
    let n = l.base().num_objects();
    Ok(NatSearch::new(&sub, f)?
        .all()
        .into_iter()
        .map(|g| {
            let mut out: Family = (0..n).map(|y| vec![usize::MAX; l.size(y)]).collect();
            for y in 0..n {
                for (a, &v) in g[y].iter().enumerate() {
                    out[y][inc.at(y, a)] = v;
                }
            }
            out
        })
        .collect())
}

/// The gap map `F^L -> F'^L ×_{F'^K} F^K` of a mono `i` and a Reedy
/// fibration `q`, computed directly and as a composite of one-cell steps.
pub fn gap_map(i: &PresheafMap, q: &PresheafMap) -> Result<GapReport> {
    if !i.is_mono() {
        return Err(Error::NotMono("gap map of a non-injective map".into()));
    }
    check_same(i.source(), q.source())?;
    if !is_reedy_fibration(q)? {
        return Err(Error::NotFibration("q is not a Reedy fibration".into()));
    }
    let (k, l) = (i.source(), i.target());
    let (f, f2) = (q.source(), q.target());
    let base = l.base().clone();
    let n = base.num_objects();

    // Cells of L outside K in attaching order.
    let dec = cell_decompose_mono(i)?;
    let cells: Vec<_> = dec.stages.iter().flat_map(|s| s.cells.iter().copied()).collect();
    let mut masks: Vec<Vec<Vec<bool>>> = vec![i.image()];
    for c in &cells {
        let mut m = masks.last().unwrap().clone();
        m[c.object][c.element] = true;
        masks.push(m);
    }

    // B_j = {(β: L -> F', γ: L_j -> F) | β = q γ on L_j}.
    let betas_over = |gamma: &Family| -> Result<Vec<Family>> {
        let mut search = NatSearch::new(l, f2)?;
        for y in 0..n {
            for (e, &v) in gamma[y].iter().enumerate() {
                if v != usize::MAX {
                    search.fix(y, e, q.at(y, v));
                }
            }
        }
        Ok(search.all())
    };
    let level = |mask: &Vec<Vec<bool>>| -> Result<Vec<(Family, Family)>> {
        let mut pairs = Vec::new();
        for gamma in partial_maps(l, mask, f)? {
            for beta in betas_over(&gamma)? {
                pairs.push((beta, gamma.clone()));
            }
        }
        Ok(pairs)
    };
    let index_of = |pairs: &[(Family, Family)]| -> HashMap<(Family, Family), usize> {
        pairs.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
    };

    // Direct map α ↦ (q α, α i) into pairs (β, δ: K -> F).
    let domain = NatSearch::new(l, f)?.all();
    let mut codomain = Vec::new();
    for delta in NatSearch::new(k, f)?.all() {
        let mut search = NatSearch::new(l, f2)?;
        for y in 0..n {
            for (a, &v) in delta[y].iter().enumerate() {
                search.fix(y, i.at(y, a), q.at(y, v));
            }
        }
        for beta in search.all() {
            codomain.push((beta, delta.clone()));
        }
    }
    let cod_index: HashMap<&(Family, Family), usize> = codomain.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut hits = vec![0usize; codomain.len()];
    let mut direct = Vec::with_capacity(domain.len());
    for alpha in &domain {
        let delta: Family = (0..n).map(|y| (0..k.size(y)).map(|a| alpha[y][i.at(y, a)]).collect()).collect();
        let t = cod_index[&(push(q, alpha), delta)];
        hits[t] += 1;
        direct.push(t);
    }

    // Peel cells from the top: B_j -> B_{j-1} forgets the value on the j-th
    // cell. Each α is followed down the steps.
    let mut upper = level(&masks[cells.len()])?;
    let mut factorization_agrees = upper.len() == domain.len();
    let upper_index = index_of(&upper);
    let mut pos: Vec<Option<usize>> =
        domain.iter().map(|alpha| upper_index.get(&(push(q, alpha), alpha.clone())).copied()).collect();
    drop(upper_index);
    let mut steps = Vec::with_capacity(cells.len());
    let mut rel_cache: HashMap<ObjId, (MatchingObject, HashMap<(usize, usize), usize>)> = HashMap::new();
    for (j, c) in cells.iter().enumerate().rev() {
        let lower = level(&masks[j])?;
        let lower_index = index_of(&lower);
        let mut map = Vec::with_capacity(upper.len());
        let mut step_hits = vec![0usize; lower.len()];
        for (beta, gamma) in &upper {
            let mut g = gamma.clone();
            g[c.object][c.element] = usize::MAX;
            let t = lower_index[&(beta.clone(), g)];
            step_hits[t] += 1;
            map.push(t);
        }
        if !rel_cache.contains_key(&c.object) {
            let m = MatchingObject::compute(f, c.object)?;
            let mut fiber = HashMap::new();
            for e in 0..f.size(c.object) {
                *fiber.entry((q.at(c.object, e), m.map[e])).or_insert(0) += 1;
            }
            rel_cache.insert(c.object, (m, fiber));
        }
        let (m, fiber) = &rel_cache[&c.object];
        // The fiber over (β, γ) is the fiber of F(x) -> F'(x) ×_{M'} M over
        // (β(σ), γ on ∂σ).
        let base_change = lower.iter().enumerate().all(|(t, (beta, gamma))| {
            let fam: Family = (0..n)
                .map(|y| {
                    m.inclusion.components()[y]
                        .iter()
                        .map(|&p| gamma[y][l.act(base.hom(y, c.object)[p], c.element)])
                        .collect()
                })
                .collect();
            let expected = m
                .index_of(&fam)
                .and_then(|mi| fiber.get(&(beta[c.object][c.element], mi)).copied())
                .unwrap_or(0);
            expected == step_hits[t]
        });
        steps.push(GapStep {
            object: base.object(c.object).label.clone(),
            element: c.element,
            source_size: upper.len(),
            target_size: lower.len(),
            surjective: step_hits.iter().all(|&h| h > 0),
            base_change,
        });
        for p in pos.iter_mut() {
            *p = p.map(|t| map[t]);
        }
        upper = lower;
    }
    steps.reverse();
    // B_0 ≅ codomain via γ ↦ γ ∘ i.
    for (alpha_pos, &d) in pos.iter().zip(&direct) {
        factorization_agrees &= alpha_pos.is_some_and(|t| {
            let (b0, g0) = &upper[t];
            let d0: Family = (0..n).map(|y| (0..k.size(y)).map(|a| g0[y][i.at(y, a)]).collect()).collect();
            cod_index.get(&(b0.clone(), d0)) == Some(&d)
        });
    }
    Ok(GapReport {
        domain_size: domain.len(),
        codomain_size: codomain.len(),
        surjective: hits.iter().all(|&h| h > 0),
        injective: hits.iter().all(|&h| h <= 1),
        factorization_agrees,
        expect_bijective: q.is_iso(),
        steps,
    })
}

/// `K ▷ F` with `(K ▷ F)_x = F^{J^x ⊗ K}`.
#[derive(Clone, Debug)]
pub struct FrameCotensor {
    pub frame: SetFrame,
    /// Elements at `x` as natural maps `J^x ⊗ K -> F`.
    pub elements: Vec<Vec<Family>>,
    pub warnings: Vec<DayWarning>,
}

fn yoneda(base: &Arc<BaseCategory>, f: crate::base::ArrowId) -> Result<PresheafMap> {
    let (y, x) = (base.dom(f), base.cod(f));
    let (jy, jx) = (Presheaf::representable(base, y)?, Presheaf::representable(base, x)?);
    let components = (0..base.num_objects())
        .map(|z| base.hom(z, y).iter().map(|&g| base.hom_position(base.compose(f, g))).collect())
        .collect();
    PresheafMap::new(jy, jx, components)
}

fn truncation_free(warnings: &[DayWarning]) -> Result<()> {
    match warnings.iter().find(|w| matches!(w, DayWarning::Truncated { .. })) {
        Some(DayWarning::Truncated { left, right, .. }) => {
            Err(Error::Truncation(format!("{left} ⊗ {right} lies beyond the truncation")))
        }
        _ => Ok(()),
    }
}

pub fn frame_cotensor(k: &Presheaf, f: &SetFrame) -> Result<FrameCotensor> {
    check_same(k, &f.diagram)?;
    let base = k.base().clone();
    let mut warnings = Vec::new();
    let mut elements = Vec::with_capacity(base.num_objects());
    for x in 0..base.num_objects() {
        let jx = Presheaf::representable(&base, x)?;
        let day = day_product(&jx, k)?;
        truncation_free(&day.warnings)?;
        warnings.extend(day.warnings.iter().cloned());
        let c = cotensor_skeletal(f, &day.presheaf)?;
        if !c.is_bijection() {
            return Err(Error::ModelViolation("cotensor does not represent Nat".into()));
        }
        elements.push(c.elements);
    }
    let index: Vec<HashMap<&Family, usize>> =
        elements.iter().map(|els| els.iter().enumerate().map(|(i, e)| (e, i)).collect()).collect();
    let idk = PresheafMap::identity(k);
    let mut action = Vec::with_capacity(base.num_arrows());
    for a in 0..base.num_arrows() {
        let (y, x) = (base.dom(a), base.cod(a));
        // J^a ⊗ K: J^y ⊗ K -> J^x ⊗ K, then precompose.
        let along = day_map(&yoneda(&base, a)?, &idk)?;
        let row = elements[x]
            .iter()
            .map(|alpha| {
                let moved: Family = (0..base.num_objects())
                    .map(|z| along.components()[z].iter().map(|&p| alpha[z][p]).collect())
                    .collect();
                index[y][&moved]
            })
            .collect();
        action.push(row);
    }
    let sizes = elements.iter().map(Vec::len).collect();
    let frame = SetFrame::new(Presheaf::new(base, sizes, action)?)?;
    Ok(FrameCotensor { frame, elements, warnings })
}

/// `Hom(F, J^x ▷ F')`, the value of the enriched hom at `x`.
pub fn enriched_hom_at(f: &SetFrame, f2: &SetFrame, x: ObjId) -> Result<Vec<PresheafMap>> {
    let jx = Presheaf::representable(f2.base(), x)?;
    let cot = frame_cotensor(&jx, f2)?;
    crate::nat::nat_set(&f.diagram, &cot.frame.diagram)
}

/// The enriched hom as a presheaf over the objects `x` where `J^x ▷ F'` fits
/// in the truncation, with its inclusion into the base.
pub fn enriched_hom(f: &SetFrame, f2: &SetFrame) -> Result<(Presheaf, Functor)> {
    check_same(&f.diagram, &f2.diagram)?;
    let base = f.base().clone();
    let m = base.monoidal().ok_or_else(|| Error::InvalidCategory("base is not monoidal".into()))?;
    let fits = |x: ObjId| (0..base.num_objects()).all(|z| m.objects.contains_key(&(x, z)));
    let (sub, inc) = base.full_subcategory(format!("{}|hom", base.name()), fits)?;
    let mut cotensors = Vec::new();
    let mut values = Vec::new();
    for xs in 0..sub.num_objects() {
        let jx = Presheaf::representable(&base, inc.obj(xs))?;
        let cot = frame_cotensor(&jx, f2)?;
        values.push(NatSearch::new(&f.diagram, &cot.frame.diagram)?.all());
        cotensors.push(cot);
    }
    let index: Vec<HashMap<&Family, usize>> =
        values.iter().map(|v| v.iter().enumerate().map(|(i, e)| (e, i)).collect()).collect();
    let n = base.num_objects();
    let mut action = Vec::with_capacity(sub.num_arrows());
    for a in 0..sub.num_arrows() {
        let (ys, xs) = (sub.dom(a), sub.cod(a));
        let arrow = inc.arrow(a);
        // J^a ▷ F' at z: F'^{J^z ⊗ J^x} -> F'^{J^z ⊗ J^y}.
        let mut at_z = Vec::with_capacity(n);
        for z in 0..n {
            let jz = Presheaf::representable(&base, z)?;
            let along = day_map(&PresheafMap::identity(&jz), &yoneda(&base, arrow)?)?;
            let idx: HashMap<&Family, usize> =
                cotensors[ys].elements[z].iter().enumerate().map(|(i, e)| (e, i)).collect();
            let row: Vec<usize> = cotensors[xs].elements[z]
                .iter()
                .map(|alpha| {
                    let moved: Family = (0..n)
                        .map(|w| along.components()[w].iter().map(|&p| alpha[w][p]).collect())
                        .collect();
                    idx[&moved]
                })
                .collect();
            at_z.push(row);
        }
        let row = values[xs]
            .iter()
            .map(|phi| {
                let moved: Family = (0..n).map(|z| phi[z].iter().map(|&e| at_z[z][e]).collect()).collect();
                index[ys][&moved]
            })
            .collect();
        action.push(row);
    }
    let sizes = values.iter().map(Vec::len).collect();
    Ok((Presheaf::new(sub, sizes, action)?, inc))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeStage {
    pub level: usize,
    pub limit_before: usize,
    pub limit_after: usize,
    pub surjective: bool,
    pub bijective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cone {
    /// `components[d][e]`, the image of `e ∈ x` in `F(d)`.
    pub components: Vec<Vec<usize>>,
    pub stages: Vec<ConeStage>,
    pub natural: bool,
    pub restricts: bool,
}

impl Cone {
    pub fn passed(&self) -> bool {
        self.natural && self.restricts && self.stages.iter().all(|s| s.surjective)
    }
}

/// Extends `a: x -> F(0)` to a cone `Δx -> F`, one codomain level at a time,
/// using the least extension of each compatible family.
pub fn cone_extend(f: &SetFrame, dr: &DrCategory, x: usize, a: &[usize]) -> Result<Cone> {
    let base = dr.base().clone();
    check_same(&f.diagram, &Presheaf::terminal(base.clone()))?;
    if a.len() != x || a.iter().any(|&v| v >= f.diagram.size(0)) {
        return Err(Error::Shape("input cone does not land in F(0)".into()));
    }
    let zero = dr
        .object_id(&crate::dr::DrObject::zero())
        .ok_or_else(|| Error::UnknownObject("0".into()))?;
    let n = base.num_objects();
    let mut components: Vec<Vec<Option<usize>>> = vec![vec![None; x]; n];
    for (e, &v) in a.iter().enumerate() {
        components[zero][e] = Some(v);
    }
    let mut stages = Vec::new();
    let mut prev: Option<(Arc<BaseCategory>, Functor, Presheaf)> = None;
    for level in 0..=dr.max_deg() {
        let (sub, inc) = dr.truncation(level)?;
        let restricted = f.diagram.restrict(&inc)?;
        let terminal = Presheaf::terminal(sub.clone());
        let limit_after = NatSearch::new(&terminal, &restricted)?.count();
        if let Some((psub, pinc, prestricted)) = &prev {
            let before = NatSearch::new(&Presheaf::terminal(psub.clone()), prestricted)?.all();
            // Position of the previous stage's objects inside this stage.
            let local: HashMap<ObjId, ObjId> = (0..sub.num_objects()).map(|d| (inc.obj(d), d)).collect();
            let mut image_count = vec![0usize; before.len()];
            let index: HashMap<Vec<usize>, usize> =
                before.iter().enumerate().map(|(i, fam)| (fam.iter().map(|r| r[0]).collect(), i)).collect();
            NatSearch::new(&terminal, &restricted)?.for_each(|fam| {
                let key: Vec<usize> = (0..psub.num_objects()).map(|d| fam[local[&pinc.obj(d)]][0]).collect();
                image_count[index[&key]] += 1;
                true
            });
            let surjective = image_count.iter().all(|&c| c > 0);
            stages.push(ConeStage {
                level,
                limit_before: before.len(),
                limit_after,
                surjective,
                bijective: surjective && image_count.iter().all(|&c| c == 1),
            });
            if !surjective {
                return Err(Error::ModelViolation(format!("restriction of limits to level {} is not surjective", level - 1)));
            }
            for e in 0..x {
                let mut search = NatSearch::new(&terminal, &restricted)?;
                for d in 0..sub.num_objects() {
                    if let Some(v) = components[inc.obj(d)][e] {
                        search.fix(d, 0, v);
                    }
                }
                let ext = search
                    .first()
                    .ok_or_else(|| Error::ModelViolation("compatible family has no extension".into()))?;
                for d in 0..sub.num_objects() {
                    components[inc.obj(d)][e] = Some(ext[d][0]);
                }
            }
        } else {
            stages.push(ConeStage { level, limit_before: 1, limit_after, surjective: true, bijective: limit_after == 1 });
        }
        prev = Some((sub, inc, restricted));
    }
    let components: Vec<Vec<usize>> = components
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.ok_or_else(|| Error::ModelViolation("cone is incomplete".into()))).collect())
        .collect::<Result<_>>()?;
    let natural = (0..base.num_arrows()).all(|m| {
        let (s, t) = (base.dom(m), base.cod(m));
        (0..x).all(|e| f.diagram.act(m, components[t][e]) == components[s][e])
    });
    let restricts = (0..x).all(|e| components[zero][e] == a[e]);
    Ok(Cone { components, stages, natural, restricts })
}

#[derive(Clone, Debug)]
pub struct PstarReport {
    pub presheaf: Presheaf,
    /// Restricting `p_* F` to `R_{≤n}` agrees with `p_*` of `F` restricted to
    /// `(D_R)_{≤n}`, through an explicit natural bijection.
    pub commutes: bool,
}

/// `p_* F` over `R`, with the restriction square checked at level `n`.
pub fn pstar_limits(f: &Presheaf, dr: &DrCategory, n: usize) -> Result<PstarReport> {
    let p = dr.projection()?;
    let full = ran(&p, f)?;
    let r_base = dr.r_base().clone();
    let (rn, rinc) = r_base.full_subcategory(format!("{}|<={n}", r_base.name()), |r| r_base.object(r).level <= n)?;
    let (dn, dinc) = dr.truncation(n)?;
    let r_local: HashMap<ObjId, ObjId> = (0..rn.num_objects()).map(|r| (rinc.obj(r), r)).collect();
    let r_arrow_local: HashMap<usize, usize> = (0..rn.num_arrows()).map(|h| (rinc.arrow(h), h)).collect();
    let pn = Functor::new(
        dn.clone(),
        rn.clone(),
        (0..dn.num_objects()).map(|d| r_local[&p.obj(dinc.obj(d))]).collect(),
        (0..dn.num_arrows()).map(|h| r_arrow_local[&p.arrow(dinc.arrow(h))]).collect(),
    )?;
    let truncated = ran(&pn, &f.restrict(&dinc)?)?;
    let mut commutes = true;
    let mut bijection: Vec<Vec<usize>> = Vec::with_capacity(rn.num_objects());
    for r in 0..rn.num_objects() {
        let rr = rinc.obj(r);
        let index: HashMap<&Family, usize> = truncated.families[r].iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut row = Vec::with_capacity(full.families[rr].len());
        for fam in &full.families[rr] {
            // Objects outside (D_R)_{≤n} have no arrows into r.
            let restricted: Family = (0..dn.num_objects())
                .map(|d| {
                    let dd = dinc.obj(d);
                    rn.hom(pn.obj(d), r)
                        .iter()
                        .map(|&h| fam[dd][r_base.hom_position(rinc.arrow(h))])
                        .collect()
                })
                .collect();
            match index.get(&restricted) {
                Some(&i) => row.push(i),
                None => commutes = false,
            }
        }
        commutes &= row.len() == truncated.families[r].len() && {
            let mut s = row.clone();
            s.sort_unstable();
            s.dedup();
            s.len() == row.len()
        };
        bijection.push(row);
    }
    if commutes {
        let restricted_full = full.presheaf.restrict(&rinc)?;
        let map = PresheafMap::new(restricted_full, truncated.presheaf.clone(), bijection);
        commutes = map.map(|m| m.is_iso()).unwrap_or(false);
    }
    Ok(PstarReport { presheaf: full.presheaf, commutes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::cube_base;
    use crate::cube::HomMode;
    use crate::generate::{random_fibrant, random_fibration_onto, relabel, FrameParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frame(seed: u64, deg: usize) -> SetFrame {
        let base = cube_base(HomMode::Plain, deg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SetFrame::new(random_fibrant(&base, &mut rng, FrameParams { base_max: 2, pad_max: 2 }).unwrap()).unwrap()
    }

    #[test]
    fn cotensor_of_representable_is_the_value() {
        let f = frame(1, 2);
        for x in 0..3 {
            let j = Presheaf::representable(f.base(), x).unwrap();
            let c = cotensor_skeletal(&f, &j).unwrap();
            assert_eq!(c.size(), f.diagram.size(x));
            assert!(c.is_bijection());
        }
        let empty = Presheaf::empty(f.base().clone());
        assert_eq!(cotensor_skeletal(&f, &empty).unwrap().size(), 1);
    }

    #[test]
    fn cotensor_of_square_boundary() {
        let f = frame(2, 2);
        let (d, _) = Presheaf::boundary(f.base(), 2).unwrap();
        let c = cotensor_skeletal(&f, &d).unwrap();
        assert!(c.is_bijection());
        assert_eq!(c.size(), MatchingObject::compute(&f.diagram, 2).unwrap().size());
    }

    #[test]
    fn non_fibrant_is_rejected() {
        let base = cube_base(HomMode::Plain, 1);
        let k = Presheaf::constant(base, 2);
        assert!(matches!(SetFrame::new(k), Err(Error::NotFibrant(_))));
    }

    #[test]
    fn gap_of_boundary_inclusion() {
        let f2 = frame(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_fibration_onto(&f2.diagram, &mut rng, 2).unwrap();
        let (_, i) = Presheaf::boundary(f2.base(), 2).unwrap();
        let g = gap_map(&i, &q).unwrap();
        assert!(g.passed(), "{g:?}");
        assert_eq!(g.steps.len(), 1);
        let iso = relabel(&f2.diagram, &mut rng).unwrap().inverse().unwrap();
        let g = gap_map(&i, &iso).unwrap();
        assert!(g.expect_bijective && g.passed());
    }

    #[test]
    fn gap_with_identity_and_empty() {
        let f2 = frame(4, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let q = random_fibration_onto(&f2.diagram, &mut rng, 2).unwrap();
        let j = Presheaf::representable(f2.base(), 1).unwrap();
        let g = gap_map(&PresheafMap::identity(&j), &q).unwrap();
        assert!(g.passed() && g.steps.is_empty());
        let empty = PresheafMap::new(Presheaf::empty(f2.base().clone()), j, vec![Vec::new(); 2]).unwrap();
        let g = gap_map(&empty, &q).unwrap();
        assert!(g.passed());
        assert_eq!(g.codomain_size, f2.diagram.size(1));
    }

    #[test]
    fn frame_cotensor_by_unit() {
        let f = frame(7, 2);
        let unit = Presheaf::representable(f.base(), 0).unwrap();
        let c = frame_cotensor(&unit, &f).unwrap();
        assert_eq!(c.frame.diagram.sizes(), f.diagram.sizes());
        let (h, _) = enriched_hom(&f, &f).unwrap();
        assert!(h.size(0) >= 1);
        let at0 = enriched_hom_at(&f, &f, 0).unwrap();
        assert_eq!(at0.len(), h.size(0));
    }
}
