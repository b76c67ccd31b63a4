//! Collapsing the entropy LP along a symmetry group of the access structure.

use std::collections::{BTreeMap, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use super::certify::DualCertificate;
use super::model::{EntropyLayout, LpModel, Sense};
use crate::structures::{cell_census, AccessStructure};
use crate::{Error, Rational, Result};

/// A permutation group on participants, stored as the list of all its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    m: usize,
    perms: Vec<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl SymmetryGroup {
    pub fn trivial(m: usize) -> Self {
        SymmetryGroup { m, perms: vec![(0..m).collect()] }
    }

    /// All permutations of the minimal sets, acting on participants through their
    /// membership patterns. Requires every participant to have a distinct pattern
    /// and every non-constant pattern to occur.
    pub fn for_structure(structure: &AccessStructure) -> Result<Self> {
        let n = structure.num_minimal();
        let census = cell_census(structure)?;
        if n > 7 || !census.is_normalized() {
            return Ok(Self::trivial(structure.m()));
        }
        let patterns: Vec<u64> = (0..structure.m())
            .map(|p| structure.membership_pattern(p).map(|q| q.bits()))
            .collect::<Result<_>>()?;
        let mut by_pattern = HashMap::new();
        for (p, &q) in patterns.iter().enumerate() {
            by_pattern.insert(q, p);
        }
        let perms = permutations(n)
            .into_iter()
            .map(|sigma| {
                patterns
                    .iter()
                    .map(|&q| {
                        let image = (0..n).filter(|&i| q >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << sigma[i]);
                        by_pattern[&image]
                    })
                    .collect()
            })
            .collect();
        let g = SymmetryGroup { m: structure.m(), perms };
        g.check_preserves(structure)?;
        Ok(g)
    }

    fn check_preserves(&self, structure: &AccessStructure) -> Result<()> {
        let mut sets = structure.minimal_sets().to_vec();
        sets.sort_unstable();
        for perm in &self.perms {
            let mut image: Vec<_> = sets.iter().map(|&a| self.apply_subset(perm, a)).collect();
            image.sort_unstable();
            if image != sets {
                return Err(Error::InvalidArgument("permutation does not preserve the structure".into()));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.len() == 1
    }

    fn apply_subset(&self, perm: &[usize], mask: u128) -> u128 {
        let mut out = 0u128;
        let mut rest = mask;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << if p < self.m { perm[p] } else { p };
        }
        out
    }
}

/// A reduced model plus what is needed to map solutions back.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub model: LpModel,
    /// Orbit of each original column.
    pub var_orbit: Vec<u32>,
    pub orbit_sizes: Vec<u32>,
    /// An original row that reduces to each reduced row.
    pub row_rep: Vec<usize>,
    group: SymmetryGroup,
}

/// Replaces each variable by its orbit and each row by the sum of its
/// coefficients per orbit, dropping duplicate rows (a `≥` row keeps the largest
/// right-hand side among rows with the same left side).
pub fn symmetry_reduce(model: &LpModel, structure: &AccessStructure) -> Result<Reduction> {
    let group = SymmetryGroup::for_structure(structure)?;
    reduce_with(model, structure.m(), group)
}

pub fn reduce_with(model: &LpModel, m: usize, group: SymmetryGroup) -> Result<Reduction> {
    let layout = EntropyLayout { m };
    if model.num_vars() != layout.subsets() + 1 || model.objective() != layout.t() {
        return Err(Error::DimensionMismatch("model is not an entropy LP on this structure".into()));
    }
    let mut rep_of: Vec<u32> = vec![u32::MAX; layout.subsets()];
    let mut orbit_id: BTreeMap<u32, u32> = BTreeMap::new();
    for v in 0..layout.subsets() {
        let rep = group.perms.iter().map(|p| group.apply_subset(p, v as u128) as u32).min().unwrap();
        rep_of[v] = rep;
        let next = orbit_id.len() as u32;
        orbit_id.entry(rep).or_insert(next);
    }
    // orbit numbering follows ascending representative
    let ids: BTreeMap<u32, u32> = orbit_id.keys().enumerate().map(|(i, &r)| (r, i as u32)).collect();
    let mut var_orbit: Vec<u32> = rep_of.iter().map(|r| ids[r]).collect();
    let t_orbit = ids.len() as u32;
    var_orbit.push(t_orbit);
    let mut orbit_sizes = vec![0u32; ids.len() + 1];
    for &o in &var_orbit {
        orbit_sizes[o as usize] += 1;
    }
    let mut names: Vec<String> = ids.keys().map(|&r| layout.name(r as usize)).collect();
    names.push("t".into());

    let mut reduced = LpModel::new(names, t_orbit as usize);
    let mut row_rep = Vec::new();
    let mut seen: HashMap<(Vec<(u32, i32)>, Sense), usize> = HashMap::new();
    for r in 0..model.num_rows() {
        let mut terms: Vec<(u32, i32)> = model.row(r).map(|(c, a)| (var_orbit[c], a as i32)).collect();
        terms.sort_unstable_by_key(|&(c, _)| c);
        let mut merged: Vec<(u32, i32)> = Vec::with_capacity(terms.len());
        for (c, a) in terms {
            match merged.last_mut() {
                Some((lc, la)) if *lc == c => *la += a,
                _ => merged.push((c, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0);
        let (sense, rhs) = (model.sense(r), model.rhs(r));
        if merged.is_empty() {
            let ok = match sense {
                Sense::Ge => rhs <= 0,
                Sense::Eq => rhs == 0,
            };
            if !ok {
                return Err(Error::Infeasible);
            }
            continue;
        }
        match seen.get(&(merged.clone(), sense)) {
            Some(&i) => {
                let old = reduced.rhs(i);
                match sense {
                    Sense::Eq if old != rhs => return Err(Error::Infeasible),
                    Sense::Ge if rhs > old => {
                        reduced.set_rhs(i, rhs);
                        row_rep[i] = r;
                    }
                    _ => {}
                }
            }
            None => {
                seen.insert((merged.clone(), sense), reduced.num_rows());
                reduced.push_row(&merged, sense, rhs, model.family(r));
                row_rep.push(r);
            }
        }
    }
    Ok(Reduction { model: reduced, var_orbit, orbit_sizes, row_rep, group })
}

fn row_key(terms: &[(u32, i32)], sense: Sense, rhs: i64) -> u64 {
    let mut h = DefaultHasher::new();
    terms.hash(&mut h);
    sense.hash(&mut h);
    rhs.hash(&mut h);
    h.finish()
}

impl Reduction {
    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    /// Original point with every variable set to its orbit's value.
    pub fn lift_primal(&self, x: &[Rational]) -> Vec<Rational> {
        self.var_orbit.iter().map(|&o| x[o as usize].clone()).collect()
    }

    /// Spreads each reduced multiplier evenly over the orbit of its representative row.
    pub fn lift_dual(&self, original: &LpModel, cert: &DualCertificate) -> Result<DualCertificate> {
        let mut index: HashMap<u64, Vec<u32>> = HashMap::new();
        for r in 0..original.num_rows() {
            index
                .entry(row_key(&original.row_terms(r), original.sense(r), original.rhs(r)))
                .or_default()
                .push(r as u32);
        }
        let t = original.objective() as u32;
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (rr, y) in &cert.multipliers {
            let r = self.row_rep[*rr];
            let base = original.row_terms(r);
            let (sense, rhs) = (original.sense(r), original.rhs(r));
            let mut orbit: Vec<usize> = Vec::new();
            for perm in &self.group.perms {
                let mut terms: Vec<(u32, i32)> = base
                    .iter()
                    .map(|&(c, a)| (if c == t { c } else { self.group.apply_subset(perm, c as u128) as u32 }, a))
                    .collect();
                terms.sort_unstable_by_key(|&(c, _)| c);
                let hit = index
                    .get(&row_key(&terms, sense, rhs))
                    .and_then(|cands| cands.iter().find(|&&c| original.row_terms(c as usize) == terms))
                    .ok_or_else(|| Error::Certification(format!("image of row {r} is not a model row")))?;
                orbit.push(*hit as usize);
            }
            orbit.sort_unstable();
            orbit.dedup();
            let share = y / Rational::from_integer((orbit.len() as i64).into());
            for o in orbit {
                *out.entry(o).or_insert_with(|| Rational::from_integer(0.into())) += &share;
            }
        }
        Ok(DualCertificate { multipliers: out.into_iter().collect(), bound: cert.bound.clone() })
    }
}
