//! Absolute density of `p: D_R -> R` and monoidality of `p_!` on representables.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::day::{day_product, DayTriple, DayWarning};
use crate::dr::DrCategory;
use crate::error::Result;
use crate::generate::enumerate_presheaves;
use crate::kan::lan;
use crate::nat::{count_nat, nat_set};
use crate::presheaf::{Presheaf, PresheafMap};

#[derive(Clone, Debug, Serialize)]
pub struct DensityFailure {
    pub left: usize,
    pub right: usize,
    pub nat: usize,
    pub pulled_back: usize,
    pub distinct_restrictions: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub presheaves: usize,
    pub pairs: usize,
    pub failures: Vec<DensityFailure>,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares `Nat(X, Y)` with `Nat(p^*X, p^*Y)` through restriction, for every
/// pair of presheaves over `R` with at most `max_size` elements per object.
pub fn density_check(dr: &DrCategory, max_size: usize) -> Result<DensityReport> {
    let p = dr.projection()?;
    let all = enumerate_presheaves(dr.r_base(), max_size)?;
    let pulled: Vec<Presheaf> = all.iter().map(|x| x.restrict(&p)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..all.len()).flat_map(|i| (0..all.len()).map(move |j| (i, j))).collect();
    let results: Vec<Option<DensityFailure>> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Option<DensityFailure>> {
            let maps = nat_set(&all[i], &all[j])?;
            let restricted: HashSet<Vec<Vec<usize>>> = maps
                .iter()
                .map(|m| m.restrict(&p).map(|r| r.components().to_vec()))
                .collect::<Result<_>>()?;
            let pulled_back = count_nat(&pulled[i], &pulled[j])?;
            if maps.len() == pulled_back && restricted.len() == maps.len() {
                Ok(None)
            } else {
                Ok(Some(DensityFailure {
                    left: i,
                    right: j,
                    nat: maps.len(),
                    pulled_back,
                    distinct_restrictions: restricted.len(),
                }))
            }
        })
        .collect::<Result<_>>()?;
    Ok(DensityReport { presheaves: all.len(), pairs: pairs.len(), failures: results.into_iter().flatten().collect() })
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongLanCase {
    pub left: String,
    pub right: String,
    pub lan_of_product: Vec<usize>,
    pub product_of_lans: Vec<usize>,
    /// The comparison is a well-defined natural map.
    pub natural: bool,
    pub iso: bool,
    pub warnings: Vec<DayWarning>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongLanReport {
    pub cases: Vec<StrongLanCase>,
}

impl StrongLanReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.iso)
    }
}

/// `p_!(D^a ⊗ D^b) -> p_!D^a ⊗ p_!D^b` for objects whose codomain degrees
/// sum to at most `max_cod`.
pub fn strong_lan_check(dr: &DrCategory, max_cod: usize) -> Result<StrongLanReport> {
    let p = dr.projection()?;
    let base = dr.base().clone();
    let r = dr.r_base().clone();
    let rm = r.monoidal().expect("cube bases are monoidal").clone();
    let reps: Vec<Presheaf> = (0..base.num_objects()).map(|a| Presheaf::representable(&base, a)).collect::<Result<_>>()?;
    let lans: Vec<_> = reps.iter().map(|d| lan(&p, d)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..base.num_objects())
        .flat_map(|a| (0..base.num_objects()).map(move |b| (a, b)))
        .filter(|&(a, b)| dr.object(a).cod_dim() + dr.object(b).cod_dim() <= max_cod)
        .collect();
    let cases = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<StrongLanCase> {
            let day = day_product(&reps[a], &reps[b])?;
            let left = lan(&p, &day.presheaf)?;
            let right = day_product(&lans[a].presheaf, &lans[b].presheaf)?;
            let mut components = Vec::with_capacity(r.num_objects());
            let mut natural = true;
            for x in 0..r.num_objects() {
                let mut comp = Vec::with_capacity(left.presheaf.size(x));
                for class in 0..left.presheaf.size(x) {
                    let (d, e, g) = left.rep(x, class);
                    let t = day.rep(d, e);
                    let (pi, pj) = (p.obj(t.i), p.obj(t.j));
                    // p is monoidal on objects: p(i ⊗ j) = p i ⊗ p j.
                    if rm.objects.get(&(pi, pj)) != Some(&r.cod(p.arrow(t.u))) {
                        natural = false;
                    }
                    let triple = DayTriple {
                        i: pi,
                        j: pj,
                        a: lans[a].class(t.i, t.a, r.identity(pi)),
                        b: lans[b].class(t.j, t.b, r.identity(pj)),
                        u: r.compose(p.arrow(t.u), g),
                    };
                    match right.class(triple) {
                        Ok(c) => comp.push(c),
                        Err(_) => {
                            natural = false;
                            comp.push(0);
                        }
                    }
                }
                components.push(comp);
            }
            let map = if natural {
                PresheafMap::new(left.presheaf.clone(), right.presheaf.clone(), components).ok()
            } else {
                None
            };
            Ok(StrongLanCase {
                left: dr.object(a).label(),
                right: dr.object(b).label(),
                lan_of_product: left.presheaf.sizes().to_vec(),
                product_of_lans: right.presheaf.sizes().to_vec(),
                natural: map.is_some(),
                iso: map.is_some_and(|m| m.is_iso()),
                warnings: day.warnings.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StrongLanReport { cases })
}
