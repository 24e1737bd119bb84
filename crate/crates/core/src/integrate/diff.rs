use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Result;
use crate::ncalg::{Coeff, Factor};
use crate::symcalc::Letter;

use super::radial::{operands_text, radial_terms, BrSum, RadialTerm};
use super::rearrange::{apply_rearrangement, Convention, CurvatureFunctional, HTerm};

type Group = (i32, Vec<Vec<Factor>>);
type Contribs = BTreeMap<(Group, Vec<u32>), Coeff>;

fn add_to(map: &mut Contribs, key: (Group, Vec<u32>), c: Coeff) {
    let e = map.entry(key).or_default();
    *e = *e + c;
}

/// Factor turning line coefficients under `prefactor` into `B(r)` coefficients.
fn to_raw_scale(prefactor: Coeff) -> Coeff {
    prefactor * Convention::Raw.prefactor().inv()
}

/// Undoes the rearrangement of one line and redoes it after expanding
/// `k^-1` words and normal ordering, so differently written lines compare.
fn canonical_line(line: &HTerm, scale: Coeff) -> Result<Contribs> {
    let mut out = Contribs::new();
    for (h, c) in &line.combo {
        let m: u32 = h.iter().sum();
        let k_prefix = line.kpow - 6 + 4 * m as i32 - 2;
        let mut letters = vec![Letter::k(k_prefix)];
        for (j, &mj) in h.iter().enumerate() {
            if mj > 0 {
                letters.push(Letter::B(mj));
            }
            if let Some(rho) = line.operands.get(j) {
                letters.extend(rho.iter().cloned().map(Letter::F));
            }
        }
        for t in radial_terms(*c * scale, m.saturating_sub(1), &letters) {
            let r = apply_rearrangement(&t)?;
            add_to(&mut out, ((r.kpow + 6, r.operands), r.index), r.coeff * Coeff::int(2));
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn canonical(f: &CurvatureFunctional) -> Result<Vec<Contribs>> {
    let scale = to_raw_scale(f.prefactor);
    f.lines.iter().map(|l| canonical_line(l, scale)).collect()
}

fn groups_of(c: &Contribs) -> BTreeSet<Group> {
    c.keys().map(|(g, _)| g.clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    /// Operands exist on both sides, coefficients differ.
    Coefficient,
    /// A golden operand product has no computed counterpart.
    Operand,
    /// A computed line has no golden counterpart.
    MissingLine,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    /// 1-based golden line, when the discrepancy is attached to one.
    pub golden_line: Option<usize>,
    pub operands: String,
    pub golden: String,
    pub computed: String,
    /// Set when the golden line repeats an earlier golden line verbatim.
    pub duplicate_of: Option<usize>,
    /// `B(r)` terms feeding the operands, when available.
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremDiff {
    pub golden_lines: usize,
    pub computed_lines: usize,
    /// 1-based golden lines that match exactly after canonicalization.
    pub matched: Vec<usize>,
    pub discrepancies: Vec<Discrepancy>,
}

impl TheoremDiff {
    pub fn is_exact(&self) -> bool {
        self.discrepancies.is_empty() && self.matched.len() == self.golden_lines
    }
}

fn combo_text(c: &Contribs, groups: &BTreeSet<Group>) -> String {
    let parts: Vec<String> = c
        .iter()
        .filter(|((g, _), _)| groups.contains(g))
        .map(|((g, h), x)| format!("k^{} {x} H{h:?}", g.0))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}

fn restrict(c: &Contribs, groups: &BTreeSet<Group>) -> Contribs {
    c.iter().filter(|((g, _), _)| groups.contains(g)).map(|(k, v)| (k.clone(), *v)).collect()
}

fn sum_of<'a>(items: impl Iterator<Item = &'a Contribs>) -> Contribs {
    let mut out = Contribs::new();
    for c in items {
        for (k, v) in c {
            add_to(&mut out, k.clone(), *v);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `B(r)` terms whose rearrangement lands in one of `groups`.
fn evidence_for(br: Option<&BrSum>, groups: &BTreeSet<Group>) -> Vec<String> {
    let Some(br) = br else { return Vec::new() };
    br.iter()
        .filter(|t: &RadialTerm| {
            apply_rearrangement(t)
                .map(|r| groups.contains(&(r.kpow + 6, r.operands)))
                .unwrap_or(false)
        })
        .map(|t| t.to_string())
        .collect()
}

/// Line-by-line structural diff. Golden lines that share canonical operand
/// groups (for instance through `k^-1` words) are compared as a cluster.
pub fn theorem_diff(computed: &CurvatureFunctional, golden: &CurvatureFunctional) -> Result<TheoremDiff> {
    theorem_diff_with_evidence(computed, golden, None)
}

pub fn theorem_diff_with_evidence(
    computed: &CurvatureFunctional,
    golden: &CurvatureFunctional,
    br: Option<&BrSum>,
) -> Result<TheoremDiff> {
    let comp = sum_of(canonical(computed)?.iter());
    let gold = canonical(golden)?;
    let n = gold.len();

    // union-find over golden lines sharing a group
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    let mut owner: BTreeMap<Group, usize> = BTreeMap::new();
    for (i, c) in gold.iter().enumerate() {
        for g in groups_of(c) {
            match owner.get(&g) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    owner.insert(g, i);
                }
            }
        }
    }
    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        clusters.entry(r).or_default().push(i);
    }

    let comp_groups = groups_of(&comp);
    let mut matched = Vec::new();
    let mut discrepancies = Vec::new();
    for lines in clusters.values() {
        let groups: BTreeSet<Group> = lines.iter().flat_map(|&i| groups_of(&gold[i])).collect();
        let want = restrict(&comp, &groups);
        if sum_of(lines.iter().map(|&i| &gold[i])) == want {
            matched.extend(lines.iter().map(|&i| i + 1));
            continue;
        }
        // verbatim repeats of an earlier golden line
        let mut dup_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (a, &i) in lines.iter().enumerate() {
            if let Some(&j) = lines[..a].iter().find(|&&j| golden.lines[j] == golden.lines[i]) {
                dup_of.insert(i, j);
            }
        }
        let kept: Vec<usize> = lines.iter().copied().filter(|i| !dup_of.contains_key(i)).collect();
        if !dup_of.is_empty() && sum_of(kept.iter().map(|&i| &gold[i])) == want {
            matched.extend(kept.iter().map(|&i| i + 1));
            for (&i, &j) in &dup_of {
                let g = groups_of(&gold[i]);
                discrepancies.push(Discrepancy {
                    kind: DiscrepancyKind::Coefficient,
                    golden_line: Some(i + 1),
                    operands: operands_text(&golden.lines[i].operands),
                    golden: combo_text(&sum_of(lines.iter().map(|&i| &gold[i])), &g),
                    computed: combo_text(&want, &g),
                    duplicate_of: Some(j + 1),
                    evidence: evidence_for(br, &g),
                });
            }
            continue;
        }
        for &i in lines {
            let g = groups_of(&gold[i]);
            let kind = if g.iter().any(|x| comp_groups.contains(x)) {
                DiscrepancyKind::Coefficient
            } else {
                DiscrepancyKind::Operand
            };
            discrepancies.push(Discrepancy {
                kind,
                golden_line: Some(i + 1),
                operands: operands_text(&golden.lines[i].operands),
                golden: combo_text(&sum_of(lines.iter().map(|&i| &gold[i])), &g),
                computed: combo_text(&want, &g),
                duplicate_of: dup_of.get(&i).map(|j| j + 1),
                evidence: evidence_for(br, &g),
            });
        }
    }
    for g in comp_groups.iter().filter(|g| !owner.contains_key(*g)) {
        let gs: BTreeSet<Group> = [g.clone()].into();
        discrepancies.push(Discrepancy {
            kind: DiscrepancyKind::MissingLine,
            golden_line: None,
            operands: operands_text(&g.1),
            golden: "0".into(),
            computed: combo_text(&comp, &gs),
            duplicate_of: None,
            evidence: evidence_for(br, &gs),
        });
    }
    matched.sort_unstable();
    Ok(TheoremDiff { golden_lines: n, computed_lines: computed.lines.len(), matched, discrepancies })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BrDiff {
    pub common: usize,
    pub only_computed: Vec<String>,
    pub only_golden: Vec<String>,
    /// `(term, golden coefficient)` where coefficients differ.
    pub coefficient: Vec<(String, String)>,
}

impl BrDiff {
    pub fn is_exact(&self) -> bool {
        self.only_computed.is_empty() && self.only_golden.is_empty() && self.coefficient.is_empty()
    }
}

/// Term-by-term comparison of two normal-ordered integrands.
pub fn br_diff(computed: &BrSum, golden: &BrSum) -> BrDiff {
    let mut d = BrDiff::default();
    for t in computed.iter() {
        match golden.terms.get(&t.key) {
            None => d.only_computed.push(t.to_string()),
            Some(c) if *c != t.coeff => d.coefficient.push((t.to_string(), c.to_string())),
            Some(_) => d.common += 1,
        }
    }
    for t in golden.iter() {
        if !computed.terms.contains_key(&t.key) {
            d.only_golden.push(t.to_string());
        }
    }
    d
}
