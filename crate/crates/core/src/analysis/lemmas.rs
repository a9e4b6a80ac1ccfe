//! The lemma suite: each result encoded as an implication and checked on
//! seeded random finite instances.
//!
//! A trial is `Vacuous` when the antecedent fails, `Pass` when antecedent and
//! consequent hold, and `Violation` otherwise. Probes (`L13`, `T-final`)
//! record `ProbeViolation` instead; they encode claims that are not theorems
//! at this scale.
//!
//! Finite-scale readings:
//! * `F(X)` and `2^X` are both `F_N(X)` on an `N`-point carrier.
//! * "every open set" is every singleton.
//! * `L14` evaluates its antecedent at the refinement `δ ≤ ε`, the largest
//!   carrier distance with `G_δ^n ⊆ G_ε(f^n)` for all `n <= 4`. At `δ = ε` it
//!   fails (see `l14_needs_refinement` in the tests).
//! * `L15` bounds total transitivity by `max(4, N)`, enough to see any
//!   period of an `N`-vertex graph; exact orbits are required, so builtins
//!   with images off the carrier are vacuous.
//! * `L16` adds `V ∪ W ≠ X`, the finite trace of connectedness.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::predicates::{
    chain_transitivity, coprime_everywhere, exact_cover_length, successor_image, wielandt_bound, ExactOutcome,
};
use super::random::{random_instance, trial_seed, Instance, MapFamily, RandomSpec};
use crate::chains::{find_chain, validate_chain};
use crate::error::{invalid, Error, Result};
use crate::graph::TransitionGraph;
use crate::hyperspace::{hyper_graph_from_base, select_base_chain_from_hyper_chain, tuple_to_set_factor, HyperSystem};
use crate::relation::BitMatrix;
use crate::system::{build_transition_graph, tensor_power, FactorMap, MapSystem, ProductSystem};
use crate::uniform::{epsilon_components, Carrier, Entourage};
use crate::{Exact, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum LemmaId {
    P1,
    L3,
    L4,
    C6,
    L7,
    L8,
    L9,
    P10,
    L11,
    L12,
    L13,
    L14,
    L15,
    L16,
    TFinal,
}

impl LemmaId {
    pub const ALL: [LemmaId; 15] = [
        LemmaId::P1,
        LemmaId::L3,
        LemmaId::L4,
        LemmaId::C6,
        LemmaId::L7,
        LemmaId::L8,
        LemmaId::L9,
        LemmaId::P10,
        LemmaId::L11,
        LemmaId::L12,
        LemmaId::L13,
        LemmaId::L14,
        LemmaId::L15,
        LemmaId::L16,
        LemmaId::TFinal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::P1 => "P1",
            LemmaId::L3 => "L3",
            LemmaId::L4 => "L4",
            LemmaId::C6 => "C6",
            LemmaId::L7 => "L7",
            LemmaId::L8 => "L8",
            LemmaId::L9 => "L9",
            LemmaId::P10 => "P10",
            LemmaId::L11 => "L11",
            LemmaId::L12 => "L12",
            LemmaId::L13 => "L13",
            LemmaId::L14 => "L14",
            LemmaId::L15 => "L15",
            LemmaId::L16 => "L16",
            LemmaId::TFinal => "T-final",
        }
    }

    /// Probes only log violations.
    pub fn is_probe(self) -> bool {
        matches!(self, LemmaId::L13 | LemmaId::TFinal)
    }

    /// Largest carrier size the trial uses.
    pub fn point_cap(self) -> usize {
        match self {
            LemmaId::P1 => 6,
            LemmaId::L3 | LemmaId::L4 | LemmaId::C6 => 5,
            LemmaId::P10 => 4,
            LemmaId::L7 | LemmaId::L8 => 16,
            LemmaId::L9 | LemmaId::L11 => 8,
            LemmaId::L12 | LemmaId::L13 | LemmaId::L14 | LemmaId::L15 | LemmaId::TFinal => 10,
            LemmaId::L16 => 12,
        }
    }

    /// Lemmas whose construction needs table maps.
    fn tables_only(self) -> bool {
        matches!(self, LemmaId::P10 | LemmaId::L9)
    }

    /// Parses a comma-separated list or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<LemmaId>> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out: Vec<LemmaId> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id: LemmaId = part.parse().map_err(|e: String| invalid(e))?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        if out.is_empty() {
            return Err(invalid("empty lemma list"));
        }
        Ok(out)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lemma id `{s}`"))
    }
}

impl From<LemmaId> for String {
    fn from(id: LemmaId) -> String {
        id.as_str().to_string()
    }
}

impl TryFrom<String> for LemmaId {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Vacuous,
    Violation,
    ProbeViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub lemma: LemmaId,
    pub trial: usize,
    /// Replays the trial on its own.
    pub seed: u64,
    pub instance: String,
    pub antecedent: bool,
    pub consequent: bool,
    pub outcome: Outcome,
    /// An alternative reading, checked alongside (`L11` without `x ≠ z`,
    /// `L14` and `L16` read literally, `L15` with `n_max = 4`).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alternative: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub lemma: LemmaId,
    pub probe: bool,
    pub trials: usize,
    pub passed: usize,
    pub vacuous: usize,
    pub violations: usize,
    /// Trials where the alternative reading failed.
    pub alternative_failures: usize,
    /// `pass`, `fail`, or `probe`.
    pub status: String,
    pub violation_seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchSpec {
    pub lemmas: Vec<LemmaId>,
    pub trials: usize,
    pub seed: u64,
    pub max_points: usize,
    pub family: MapFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub summaries: Vec<LemmaSummary>,
    pub records: Vec<TrialRecord>,
}

impl BatchReport {
    /// A non-probe lemma was violated.
    pub fn hard_violation(&self) -> bool {
        self.summaries.iter().any(|s| !s.probe && s.violations > 0)
    }
}

struct Check {
    antecedent: bool,
    consequent: bool,
    alternative: Option<bool>,
    detail: String,
}

impl Check {
    fn new(antecedent: bool, consequent: bool, detail: impl Into<String>) -> Self {
        Self {
            antecedent,
            consequent,
            alternative: None,
            detail: detail.into(),
        }
    }

    fn alt(mut self, alternative: bool) -> Self {
        self.alternative = Some(alternative);
        self
    }
}

fn spec_for(lemma: LemmaId, max_points: usize, family: MapFamily) -> RandomSpec {
    RandomSpec {
        min_points: 1,
        max_points: max_points.min(lemma.point_cap()).max(1),
        family: if lemma.tables_only() { MapFamily::Tables } else { family },
    }
}

/// Runs one trial from its seed.
pub fn run_trial(lemma: LemmaId, seed: u64, max_points: usize, family: MapFamily) -> Result<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = spec_for(lemma, max_points, family);
    let (instance, check) = if lemma == LemmaId::L9 {
        let (inst, check) = check_l9(&mut rng, &spec)?;
        (inst, check)
    } else {
        let inst = random_instance(&mut rng, &spec);
        let check = check_instance(lemma, &inst, &mut rng)?;
        (inst.description, check)
    };
    let outcome = match (check.antecedent, check.consequent) {
        (false, _) => Outcome::Vacuous,
        (true, true) => Outcome::Pass,
        (true, false) if lemma.is_probe() => Outcome::ProbeViolation,
        (true, false) => Outcome::Violation,
    };
    Ok(TrialRecord {
        lemma,
        trial: 0,
        seed,
        instance,
        antecedent: check.antecedent,
        consequent: check.consequent,
        outcome,
        alternative: check.alternative,
        detail: check.detail,
    })
}

/// Runs every requested lemma `trials` times, in parallel, with results in
/// (lemma, trial) order.
pub fn run_batch(spec: &BatchSpec) -> Result<BatchReport> {
    if spec.trials == 0 {
        return Err(invalid("trials must be >= 1"));
    }
    if spec.lemmas.is_empty() {
        return Err(invalid("no lemmas requested"));
    }
    let jobs: Vec<(LemmaId, usize)> = spec
        .lemmas
        .iter()
        .flat_map(|&l| (0..spec.trials).map(move |t| (l, t)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(lemma, trial)| {
            let seed = trial_seed(spec.seed, lemma.as_str(), trial);
            run_trial(lemma, seed, spec.max_points, spec.family).map(|mut r| {
                r.trial = trial;
                r
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summaries = spec
        .lemmas
        .iter()
        .map(|&lemma| summarize(lemma, records.iter().filter(|r| r.lemma == lemma)))
        .collect();
    Ok(BatchReport { summaries, records })
}

fn summarize<'a>(lemma: LemmaId, records: impl Iterator<Item = &'a TrialRecord>) -> LemmaSummary {
    let mut s = LemmaSummary {
        lemma,
        probe: lemma.is_probe(),
        trials: 0,
        passed: 0,
        vacuous: 0,
        violations: 0,
        alternative_failures: 0,
        status: String::new(),
        violation_seeds: Vec::new(),
    };
    for r in records {
        s.trials += 1;
        match r.outcome {
            Outcome::Pass => s.passed += 1,
            Outcome::Vacuous => s.vacuous += 1,
            Outcome::Violation | Outcome::ProbeViolation => {
                s.violations += 1;
                s.violation_seeds.push(r.seed);
            }
        }
        if r.alternative == Some(false) {
            s.alternative_failures += 1;
        }
    }
    s.status = if s.probe {
        "probe".into()
    } else if s.violations > 0 {
        "fail".into()
    } else {
        "pass".into()
    };
    s
}

// Shared graph builders.

fn base_graph(inst: &Instance) -> Result<TransitionGraph> {
    build_transition_graph(&inst.system, &inst.entourage)
}

fn hyper_graph(inst: &Instance, base: &TransitionGraph, n: usize) -> Result<(HyperSystem<Exact>, TransitionGraph)> {
    let n = n.clamp(1, inst.system.len());
    let hs = HyperSystem::new(inst.system.clone(), n, usize::MAX)?;
    let g = hyper_graph_from_base(&hs, base);
    Ok((hs, g))
}

fn transitive(g: &TransitionGraph) -> bool {
    chain_transitivity(g).is_ok()
}

fn hyper_transitive(inst: &Instance, base: &TransitionGraph, n: usize) -> Result<bool> {
    Ok(transitive(&hyper_graph(inst, base, n)?.1))
}

fn exact_everywhere(g: &TransitionGraph) -> bool {
    let cap = g.len() * g.len();
    (0..g.len()).all(|x| matches!(exact_cover_length(g, &[x], cap), ExactOutcome::Covers(_)))
}

fn weakly_mixing(g: &TransitionGraph) -> bool {
    transitive(&tensor_power(g, 2))
}

fn totally_transitive(system: &MapSystem<Exact>, e: &Entourage<Exact>, n_max: usize) -> Result<Option<usize>> {
    for n in 1..=n_max {
        if !transitive(&build_transition_graph(&system.iterate(n)?, e)?) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Products `f^(n)` for `n = 1..=3`, as far as `N^n` stays small.
fn all_products_transitive(base: &TransitionGraph) -> bool {
    let orders = if base.len() <= 10 { 3 } else { 2 };
    (1..=orders).all(|n| transitive(&tensor_power(base, n)))
}

fn check_instance(lemma: LemmaId, inst: &Instance, rng: &mut ChaCha8Rng) -> Result<Check> {
    let base = base_graph(inst)?;
    let big_n = inst.system.len();
    Ok(match lemma {
        LemmaId::P1 => check_p1(inst, &base, rng)?,
        LemmaId::L3 => {
            let all = (1..=big_n)
                .map(|n| hyper_transitive(inst, &base, n))
                .collect::<Result<Vec<_>>>()?;
            let full = hyper_transitive(inst, &base, big_n)?;
            Check::new(
                all.iter().all(|&b| b),
                full,
                format!("F_n transitive for n=1..{big_n}: {all:?}"),
            )
        }
        LemmaId::L4 => {
            let full = hyper_transitive(inst, &base, big_n)?;
            let two = hyper_transitive(inst, &base, 2)?;
            Check::new(full, two, format!("F_N: {full}, F_2: {two}"))
        }
        LemmaId::C6 => {
            let top = big_n.min(4);
            let verdicts = (1..=top.max(2))
                .map(|n| hyper_transitive(inst, &base, n))
                .collect::<Result<Vec<_>>>()?;
            let first = hyper_transitive(inst, &base, big_n)?;
            let some = verdicts[1..].iter().any(|&b| b);
            let all = verdicts[..top].iter().all(|&b| b);
            let agree = first == some && some == all;
            Check::new(
                true,
                agree,
                format!(
                    "F_N: {first}, some n in 2..={}: {some}, all n <= {top}: {all}",
                    top.max(2)
                ),
            )
        }
        LemmaId::L7 => {
            let f2 = hyper_transitive(inst, &base, 2)?;
            let cap = wielandt_bound(big_n) + 1;
            let pairs = if f2 {
                coprime_everywhere(&base, cap.max(2))
            } else {
                Err(0)
            };
            let base_t = transitive(&base);
            let detail = match &pairs {
                Ok(_) => "co-prime cycles at every vertex".to_string(),
                Err(z) if f2 => format!("no co-prime cycle pair at {z}"),
                Err(_) => "F_2 not transitive".to_string(),
            };
            Check::new(f2, pairs.is_ok() && base_t, detail)
        }
        LemmaId::L8 => {
            let cap = (wielandt_bound(big_n) + 1).max(2);
            let z = (0..big_n).find(|&z| {
                crate::chains::coprime_cycles(&base, z, cap)
                    .expect("valid vertex")
                    .is_some()
            });
            let ante = transitive(&base) && z.is_some();
            let f2 = hyper_transitive(inst, &base, 2)?;
            Check::new(ante, f2, format!("co-prime vertex: {z:?}, F_2: {f2}"))
        }
        LemmaId::P10 => check_p10(inst, &base, rng)?,
        LemmaId::L11 => {
            let ante = all_products_transitive(&base);
            let cap = big_n * big_n;
            let mut literal = true;
            let mut strict = true;
            for z in 0..big_n {
                let (lit, all) = covering_length_from(&base, z, cap);
                literal &= lit.is_some();
                strict &= all.is_some();
            }
            Check::new(
                ante,
                literal,
                format!("x != z reading: {literal}, all-x reading: {strict}"),
            )
            .alt(!ante || strict)
        }
        LemmaId::L12 => {
            let exact = exact_everywhere(&base);
            let wm = weakly_mixing(&base);
            Check::new(exact, wm, format!("exact: {exact}, weakly mixing: {wm}"))
        }
        LemmaId::L13 => {
            let wm = weakly_mixing(&base);
            let exact = exact_everywhere(&base);
            Check::new(wm, exact, format!("weakly mixing: {wm}, exact: {exact}"))
        }
        LemmaId::L14 => check_l14(inst, &base)?,
        LemmaId::L15 => check_l15(inst, &base)?,
        LemmaId::L16 => check_l16(inst, &base),
        LemmaId::TFinal => {
            let f2 = hyper_transitive(inst, &base, 2)?;
            let comps = epsilon_components(&inst.entourage).len();
            Check::new(f2, comps == 1, format!("F_2: {f2}, eps-components: {comps}"))
        }
        LemmaId::L9 => unreachable!("L9 builds its own instance"),
    })
}

/// Smallest `n` with chains of length `n` from `z` to every `x ≠ z`, and
/// the smallest covering every `x`.
fn covering_length_from(g: &TransitionGraph, z: usize, cap: usize) -> (Option<usize>, Option<usize>) {
    let n = g.len();
    let mut r = FixedBitSet::with_capacity(n);
    r.insert(z);
    let (mut literal, mut all) = (None, None);
    for k in 1..=cap {
        r = successor_image(g, &r);
        let missing = n - r.count_ones(..);
        if literal.is_none() && (missing == 0 || (missing == 1 && !r.contains(z))) {
            literal = Some(k);
        }
        if all.is_none() && missing == 0 {
            all = Some(k);
        }
        if literal.is_some() && all.is_some() {
            break;
        }
    }
    (literal, all)
}

fn check_p1(inst: &Instance, base: &TransitionGraph, rng: &mut ChaCha8Rng) -> Result<Check> {
    let big_n = inst.system.len();
    let order = rng.gen_range(1..=3).min(big_n);
    let (hs, hg) = hyper_graph(inst, base, order)?;
    // every certified hyper chain between singletons must select down
    let mut selected = 0;
    for x in 0..big_n {
        for y in 0..big_n {
            let Ok(hc) = find_chain(&hg, hs.singleton_id(x), hs.singleton_id(y)) else {
                continue;
            };
            let chain = match select_base_chain_from_hyper_chain(base, &hs, &hc, x, y) {
                Ok(c) => c,
                Err(Error::SelectionFailed { step }) => {
                    return Ok(Check::new(
                        true,
                        false,
                        format!("selection failed at step {step} for {x} -> {y} in F_{order}"),
                    ))
                }
                Err(e) => return Err(e),
            };
            validate_chain(base, chain.points())?;
            if chain.length() != hc.length() || chain.first() != x || chain.last() != y {
                return Ok(Check::new(
                    true,
                    false,
                    format!("selected chain for {x} -> {y} is malformed"),
                ));
            }
            selected += 1;
        }
    }
    let hyper_t = transitive(&hg);
    let full_t = hyper_transitive(inst, base, big_n)?;
    let base_t = transitive(base);
    Ok(Check::new(
        hyper_t || full_t,
        base_t,
        format!("F_{order}: {hyper_t}, F_N: {full_t}, base: {base_t}, selected chains: {selected}"),
    ))
}

fn check_p10(inst: &Instance, base: &TransitionGraph, rng: &mut ChaCha8Rng) -> Result<Check> {
    let big_n = inst.system.len();
    let order = rng.gen_range(2..=3).min(big_n);
    let product = ProductSystem::new(inst.system.clone(), order, usize::MAX)?;
    let (hs, hg) = hyper_graph(inst, base, order)?;
    let factor = tuple_to_set_factor(&product, &hs)?;
    let conj = factor.check_semiconjugacy(&Entourage::diagonal(factor.target().carrier()))?;
    let pg = tensor_power(base, order);
    let edges_map = edges_push_forward(&pg, &hg, &factor);
    let prod_t = transitive(&pg);
    let hyper_t = transitive(&hg);
    let ok = conj.is_none() && edges_map && prod_t == hyper_t;
    Ok(Check::new(
        true,
        ok,
        format!(
            "n={order}, product: {prod_t}, F_n: {hyper_t}, h∘f^(n) = f_n∘h: {}, edges push forward: {edges_map}",
            conj.is_none()
        ),
    ))
}

fn edges_push_forward<T: Scalar>(source: &TransitionGraph, target: &TransitionGraph, h: &FactorMap<T>) -> bool {
    (0..source.len()).all(|u| source.successors(u).all(|v| target.has_edge(h.h()[u], h.h()[v])))
}

/// Semiconjugate pair: random `g` on `M` points, onto `h`, and `f` chosen in
/// the fibres so that `h ∘ f = g ∘ h`. The source entourage is `H⁻¹(E)`.
fn check_l9(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> Result<(String, Check)> {
    let target_inst = random_instance(
        rng,
        &RandomSpec {
            max_points: spec.max_points.min(5),
            ..*spec
        },
    );
    let g = target_inst.system.as_table().expect("tables").to_vec();
    let m = g.len();
    let n = rng.gen_range(m..=spec.max_points.max(m));
    let mut h: Vec<usize> = (0..m).collect();
    h.extend((m..n).map(|_| rng.gen_range(0..m)));
    let fibres: Vec<Vec<usize>> = (0..m).map(|y| (0..n).filter(|&x| h[x] == y).collect()).collect();
    let f: Vec<usize> = (0..n)
        .map(|x| {
            let fibre = &fibres[g[h[x]]];
            fibre[rng.gen_range(0..fibre.len())]
        })
        .collect();
    let source = MapSystem::table(Carrier::discrete(n)?, f)?;
    let factor = FactorMap::new(source.clone(), target_inst.system.clone(), h.clone())?;
    let conj = factor.check_semiconjugacy(&Entourage::diagonal(target_inst.system.carrier()))?;
    let d = factor.pullback(&target_inst.entourage)?;
    let src_t = transitive(&build_transition_graph(&source, &d)?);
    let tgt_t = transitive(&base_graph(&target_inst)?);
    let description = format!(
        "target: {}; source table={:?} h={h:?}",
        target_inst.description,
        source.as_table().expect("table")
    );
    let detail = format!(
        "source: {src_t}, target: {tgt_t}, semiconjugacy exact: {}",
        conj.is_none()
    );
    Ok((description, Check::new(src_t && conj.is_none(), tgt_t, detail)))
}

fn path_power(m: &BitMatrix, n: usize) -> BitMatrix {
    let mut p = m.clone();
    for _ in 1..n {
        p = p.compose(m);
    }
    p
}

const L14_N_MAX: usize = 4;

fn check_l14(inst: &Instance, base: &TransitionGraph) -> Result<Check> {
    let e = &inst.entourage;
    let eps = e.epsilon().expect("metric entourage").clone();
    let iterates = (1..=L14_N_MAX)
        .map(|n| build_transition_graph(&inst.system.iterate(n)?, e).map(|g| g.to_matrix()))
        .collect::<Result<Vec<_>>>()?;
    let carrier = inst.system.carrier();
    let mut delta = None;
    for d in carrier.distinct_distance_keys().into_iter().rev().filter(|d| *d <= eps) {
        let ed = Entourage::metric(carrier, d.clone())?;
        let gd = build_transition_graph(&inst.system, &ed)?;
        let m = gd.to_matrix();
        if (1..=L14_N_MAX).all(|n| path_power(&m, n).is_subset(&iterates[n - 1])) {
            delta = Some((d, gd));
            break;
        }
    }
    let (delta, gd) = delta.ok_or_else(|| invalid("zero threshold always refines"))?;
    let ante = all_products_transitive(&gd);
    let literal_ante = all_products_transitive(base);
    let failing = totally_transitive(&inst.system, e, L14_N_MAX)?;
    let literal = !literal_ante || failing.is_none();
    Ok(Check::new(
        ante,
        failing.is_none(),
        format!("delta={delta}, products at delta: {ante}, products at eps: {literal_ante}, first failing iterate: {failing:?}"),
    )
    .alt(literal))
}

fn on_carrier_table(system: &MapSystem<Exact>) -> Option<MapSystem<Exact>> {
    if system.is_table() {
        return Some(system.clone());
    }
    let images = system.ambient_images()?;
    let radius = system.carrier().covering_radius_of(&images)?;
    if num_traits::Zero::is_zero(&radius) {
        system.sample_to_table().ok()
    } else {
        None
    }
}

fn check_l15(inst: &Instance, base: &TransitionGraph) -> Result<Check> {
    let Some(table) = on_carrier_table(&inst.system) else {
        return Ok(Check::new(
            false,
            true,
            "images leave the carrier; orbit insertion does not apply",
        ));
    };
    let e = &inst.entourage;
    let n_max = L14_N_MAX.max(table.len());
    let failing = totally_transitive(&table, e, n_max)?;
    let wm = weakly_mixing(base);
    let short = totally_transitive(&table, e, L14_N_MAX)?;
    let literal = short.is_some() || wm;
    Ok(Check::new(
        failing.is_none(),
        wm,
        format!(
            "n_max={n_max}, first failing iterate: {failing:?}, weakly mixing: {wm}, first failing up to 4: {short:?}"
        ),
    )
    .alt(literal))
}

/// A pair of disjoint vertex sets, as bitmasks.
pub type Pair = (u32, u32);

/// Brute force over disjoint non-empty `V`, `W`: is there a pair with
/// `E[f(V)] ⊆ W` and `E[f(W)] ⊆ V`? Returns the first such pair with
/// `V ∪ W ≠ X`, and the first with `V ∪ W = X`.
pub fn swapping_pairs(g: &TransitionGraph) -> (Option<Pair>, Option<Pair>) {
    let n = g.len();
    assert!(n <= 16, "brute force is limited to 16 points");
    let full: u32 = (1u32 << n) - 1;
    let succ: Vec<u32> = (0..n)
        .map(|v| g.successors(v).fold(0u32, |m, w| m | (1 << w)))
        .collect();
    let mut img = vec![0u32; 1 << n];
    for s in 1..=full as usize {
        let low = s.trailing_zeros() as usize;
        img[s] = img[s & (s - 1)] | succ[low];
    }
    let (mut proper, mut covering) = (None, None);
    for v in 1..=full {
        let rest = full & !v;
        // W must contain E[f(V)] and avoid V
        let need = img[v as usize];
        if need & v != 0 || need == 0 {
            continue;
        }
        let mut w = rest;
        loop {
            if w & need == need && w != 0 && img[w as usize] & !v == 0 {
                if v | w == full {
                    covering.get_or_insert((v, w));
                } else {
                    proper.get_or_insert((v, w));
                }
                if proper.is_some() && covering.is_some() {
                    return (proper, covering);
                }
            }
            if w == 0 {
                break;
            }
            w = (w - 1) & rest;
        }
    }
    (proper, covering)
}

fn check_l16(inst: &Instance, base: &TransitionGraph) -> Check {
    let connected = epsilon_components(&inst.entourage).len() == 1;
    let t = transitive(base);
    let (proper, covering) = swapping_pairs(base);
    Check::new(
        t && connected,
        proper.is_none(),
        format!("transitive: {t}, eps-connected: {connected}, swapping pair with V∪W≠X: {proper:?}, with V∪W=X: {covering:?}"),
    )
    .alt(!(t && connected) || (proper.is_none() && covering.is_none()))
}

/// Replays a batch and compares it with a stored report.
pub fn replay_matches(spec: &BatchSpec, stored: &BatchReport) -> Result<bool> {
    Ok(run_batch(spec)? == *stored)
}
