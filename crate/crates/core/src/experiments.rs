//! Completeness-threshold experiments and extremal incomplete families.
//!
//! Exhaustive searches walk fixed-size subsets of the admissible universe in
//! colex order. A partial set that is already complete stays complete under
//! any extension, so its whole subtree is counted without being visited.
//! Sampled runs derive one generator per trial from `seed ^ trial_index`,
//! which keeps results identical regardless of how many threads run them.

use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ap::{longest_ap, APSearchConfig};
use crate::constructive::{DecomposeConfig, Decomposer};
use crate::error::{Error, Result};
use crate::residue::{CyclicSet, Modulus, ResidueSet};
use crate::sumset::{integer_subset_sums, is_complete, SubsetSumTable};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1_000_000;

/// Which elements a set may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Restriction {
    /// Residues coprime to `n`.
    Coprime,
    /// Any nonzero residue.
    Nonzero,
}

impl Restriction {
    pub fn universe(self, modulus: Modulus) -> Vec<u64> {
        match self {
            Restriction::Coprime => modulus.units(),
            Restriction::Nonzero => (1..modulus.get()).collect(),
        }
    }
}

impl std::str::FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coprime" => Ok(Restriction::Coprime),
            "nonzero" => Ok(Restriction::Nonzero),
            other => Err(Error::InvalidInput(format!("unknown restriction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

/// Counts for one subset size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeTally {
    pub size: usize,
    /// Sets accounted for: enumerated, pruned-and-counted, or sampled.
    pub checked: u64,
    pub complete: u64,
    pub incomplete: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub n: u64,
    pub restriction: Restriction,
    pub mode: SearchMode,
    /// Smallest size at which every admissible set is complete; `None` when
    /// even the whole universe is incomplete. In sampled mode: the smallest
    /// candidate size from which on no incomplete sample was drawn.
    pub m_star: Option<usize>,
    /// A largest incomplete set found.
    pub max_incomplete: Option<Vec<u64>>,
    pub sizes: Vec<SizeTally>,
    /// DP extensions performed (exhaustive) or sets evaluated (sampled).
    pub evaluations: u64,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// Resumable position of an exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Tallies of sizes already finished.
    pub finished: Vec<SizeTally>,
    pub size: usize,
    /// Colex ranks `0..next_rank` of the current size are done.
    pub next_rank: u64,
    pub complete: u64,
    pub incomplete: u64,
    pub first_incomplete: Option<Vec<u64>>,
    pub evaluations: u64,
}

pub struct ExactConfig<'a> {
    pub budget: u64,
    /// Disable only to cross-check the pruning.
    pub prune: bool,
    pub checkpoint_every: u64,
    pub resume: Option<Checkpoint>,
    pub on_checkpoint: Option<&'a mut dyn FnMut(&Checkpoint)>,
}

impl Default for ExactConfig<'_> {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            prune: true,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            resume: None,
            on_checkpoint: None,
        }
    }
}

impl ExactConfig<'_> {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }
}

/// Pascal triangle with saturating entries.
struct Binomials {
    rows: Vec<Vec<u64>>,
}

impl Binomials {
    fn new(max_n: usize, max_k: usize) -> Self {
        let mut rows = vec![vec![0u64; max_k + 1]; max_n + 1];
        for n in 0..=max_n {
            rows[n][0] = 1;
            for k in 1..=max_k.min(n) {
                rows[n][k] = rows[n - 1][k - 1].saturating_add(if k <= n - 1 { rows[n - 1][k] } else { 0 });
            }
        }
        Self { rows }
    }

    fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }
}

struct SizeSearch<'s, 'c> {
    universe: &'s [u64],
    binom: &'s Binomials,
    prune: bool,
    budget: u64,
    checkpoint_every: u64,
    resume_rank: u64,
    finished: &'s [SizeTally],
    size: usize,
    on_checkpoint: &'s mut Option<&'c mut dyn FnMut(&Checkpoint)>,

    chosen: Vec<usize>,
    processed: u64,
    since_checkpoint: u64,
    complete: u64,
    incomplete: u64,
    first_incomplete: Option<Vec<u64>>,
    evaluations: u64,
}

impl SizeSearch<'_, '_> {
    fn leaf_set(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.chosen.iter().map(|&c| self.universe[c]).collect();
        v.sort_unstable();
        v
    }

    fn advance(&mut self, to: u64, counted: u64) {
        self.processed = to;
        self.since_checkpoint += counted;
        if self.since_checkpoint >= self.checkpoint_every {
            self.since_checkpoint = 0;
            if let Some(cb) = self.on_checkpoint.as_mut() {
                cb(&Checkpoint {
                    finished: self.finished.to_vec(),
                    size: self.size,
                    next_rank: self.processed,
                    complete: self.complete,
                    incomplete: self.incomplete,
                    first_incomplete: self.first_incomplete.clone(),
                    evaluations: self.evaluations,
                });
            }
        }
    }

    /// Chooses the `remaining` smallest positions below `upper`, largest first.
    /// `base` is the colex rank contributed by the positions already chosen.
    fn descend(&mut self, remaining: usize, upper: usize, base: u64, sums: &ResidueSet) -> Result<()> {
        for c in remaining - 1..upper {
            let lo = base.saturating_add(self.binom.get(c, remaining));
            let width = self.binom.get(c, remaining - 1);
            let hi = lo.saturating_add(width);
            if hi <= self.resume_rank {
                continue;
            }
            self.evaluations += 1;
            if self.evaluations > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget });
            }
            let mut next = sums.clone();
            next.absorb_shift(self.universe[c]);
            self.chosen.push(c);
            if remaining == 1 {
                if next.is_full() {
                    self.complete += 1;
                } else {
                    self.incomplete += 1;
                    if self.first_incomplete.is_none() {
                        self.first_incomplete = Some(self.leaf_set());
                    }
                }
                self.advance(hi, 1);
            } else if self.prune && next.is_full() && lo >= self.resume_rank {
                self.complete += width;
                self.advance(hi, width);
            } else {
                self.descend(remaining - 1, c, lo, &next)?;
            }
            self.chosen.pop();
        }
        Ok(())
    }
}

/// Exhaustive tally of all `size`-subsets of the universe.
pub fn tally_size(modulus: Modulus, restriction: Restriction, size: usize, prune: bool, budget: u64) -> Result<SizeTally> {
    let universe = restriction.universe(modulus);
    let binom = Binomials::new(universe.len(), size + 1);
    let mut no_cb: Option<&mut dyn FnMut(&Checkpoint)> = None;
    let (tally, _, _) = search_size(&universe, &binom, size, prune, budget, DEFAULT_CHECKPOINT_EVERY, None, &[], &mut no_cb, modulus)?;
    Ok(tally)
}

#[allow(clippy::too_many_arguments)]
fn search_size<'c>(
    universe: &[u64],
    binom: &Binomials,
    size: usize,
    prune: bool,
    budget: u64,
    checkpoint_every: u64,
    resume: Option<&Checkpoint>,
    finished: &[SizeTally],
    on_checkpoint: &mut Option<&'c mut dyn FnMut(&Checkpoint)>,
    modulus: Modulus,
) -> Result<(SizeTally, Option<Vec<u64>>, u64)> {
    let total = binom.get(universe.len(), size);
    let mut search = SizeSearch {
        universe,
        binom,
        prune,
        budget,
        checkpoint_every: checkpoint_every.max(1),
        resume_rank: resume.map_or(0, |c| c.next_rank),
        finished,
        size,
        on_checkpoint,
        chosen: Vec::with_capacity(size),
        processed: 0,
        since_checkpoint: 0,
        complete: resume.map_or(0, |c| c.complete),
        incomplete: resume.map_or(0, |c| c.incomplete),
        first_incomplete: resume.and_then(|c| c.first_incomplete.clone()),
        evaluations: resume.map_or(0, |c| c.evaluations),
    };
    if size == 0 {
        // the empty set: S = {0}
        if search.resume_rank == 0 {
            search.incomplete = 1;
            search.first_incomplete = Some(Vec::new());
        }
    } else if size <= universe.len() {
        search.descend(size, universe.len(), 0, &ResidueSet::zero(modulus))?;
    }
    let tally = SizeTally {
        size,
        checked: search.complete + search.incomplete,
        complete: search.complete,
        incomplete: search.incomplete,
    };
    debug_assert_eq!(tally.checked, total.max(u64::from(size == 0)));
    Ok((tally, search.first_incomplete, search.evaluations))
}

/// Exact completeness threshold by exhaustive search, largest sizes first.
///
/// Stops at the first size that has an incomplete set; every larger size was
/// certified complete by enumeration.
pub fn exact_threshold(modulus: Modulus, restriction: Restriction, cfg: ExactConfig<'_>) -> Result<ThresholdRecord> {
    let ExactConfig {
        budget,
        prune,
        checkpoint_every,
        resume,
        mut on_checkpoint,
    } = cfg;
    let universe = restriction.universe(modulus);
    let big_n = universe.len();
    // size m costs at least N - m + 1 root-level extensions, so reaching
    // m = N/2 alone takes about N²/8
    if big_n > 64 && (big_n as u64).pow(2) / 8 > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let binom = Binomials::new(big_n, big_n + 1);

    let mut sizes: Vec<SizeTally> = resume.as_ref().map_or_else(Vec::new, |c| c.finished.clone());
    let mut evaluations = 0;
    let start_size = resume.as_ref().map_or(big_n, |c| c.size);
    let mut max_incomplete = None;
    let mut m_star = None;
    for size in (0..=start_size).rev() {
        let resume_here = resume.as_ref().filter(|c| c.size == size);
        let (tally, first, evals) = search_size(
            &universe,
            &binom,
            size,
            prune,
            budget.saturating_sub(evaluations),
            checkpoint_every,
            resume_here,
            &sizes,
            &mut on_checkpoint,
            modulus,
        )
        .map_err(|e| match e {
            Error::BudgetExceeded { .. } => Error::BudgetExceeded { budget },
            e => e,
        })?;
        evaluations += evals;
        let found = tally.incomplete > 0;
        sizes.push(tally);
        if found {
            max_incomplete = first;
            m_star = (size < big_n).then_some(size + 1);
            break;
        }
    }

    let record = ThresholdRecord {
        n: modulus.get(),
        restriction,
        mode: SearchMode::Exhaustive,
        m_star,
        max_incomplete,
        sizes,
        evaluations,
        trials: None,
        seed: None,
    };
    verify_record(modulus, &record);
    Ok(record)
}

fn verify_record(modulus: Modulus, record: &ThresholdRecord) {
    if let Some(set) = &record.max_incomplete {
        let set = CyclicSet::new(modulus, set.iter().copied()).expect("recorded set is valid");
        assert!(!is_complete(&set).complete, "recorded incomplete set is complete");
    }
}

/// Candidate subset sizes for sampled runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "value")]
pub enum SizeRule {
    /// Every size from 0 to the universe size.
    All,
    Exact(usize),
    /// `⌈c·√n⌉`.
    SqrtMultiple(f64),
    /// The smallest integer strictly larger than `2√n`.
    AboveTwoSqrt,
}

impl SizeRule {
    pub fn sizes(self, modulus: Modulus, universe: usize) -> Vec<usize> {
        let n = modulus.get();
        let one = |m: usize| if m <= universe { vec![m] } else { Vec::new() };
        match self {
            SizeRule::All => (0..=universe).collect(),
            SizeRule::Exact(m) => one(m),
            SizeRule::SqrtMultiple(c) => one(ceil_sqrt_multiple(c, n)),
            SizeRule::AboveTwoSqrt => one(above_two_sqrt(n)),
        }
    }
}

impl std::str::FromStr for SizeRule {
    type Err = Error;
    /// `all`, `m=<k>`, `c=<ratio>` or `olson`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad size rule {s:?}"));
        match s {
            "all" => Ok(SizeRule::All),
            "olson" => Ok(SizeRule::AboveTwoSqrt),
            _ => match s.split_once('=') {
                Some(("m", v)) => v.parse().map(SizeRule::Exact).map_err(|_| bad()),
                Some(("c", v)) => v.parse().map(SizeRule::SqrtMultiple).map_err(|_| bad()),
                _ => Err(bad()),
            },
        }
    }
}

/// Smallest integer `m` with `m > 2√n`, i.e. `m² > 4n`.
pub fn above_two_sqrt(n: u64) -> usize {
    ((4 * n).isqrt() + 1) as usize
}

/// `⌈c·√n⌉`.
pub fn ceil_sqrt_multiple(c: f64, n: u64) -> usize {
    (c * (n as f64).sqrt()).ceil().max(0.0) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub sizes: SizeRule,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(seed: u64, trials: usize, sizes: SizeRule) -> Self {
        Self {
            seed,
            trials,
            sizes,
            jobs: None,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs);
        self
    }

    fn rng(&self, trial_index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ trial_index)
    }
}

/// Runs `f(0..count)` with the configured parallelism, collecting in index order.
fn run_indexed<T: Send>(jobs: Option<usize>, count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    match jobs {
        Some(1) => Ok((0..count).map(f).collect()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
        }
        None => Ok((0..count).into_par_iter().map(f).collect()),
    }
}

fn random_subset(rng: &mut ChaCha8Rng, universe: &[u64], size: usize) -> Vec<u64> {
    let mut v: Vec<u64> = sample(rng, universe.len(), size).into_iter().map(|i| universe[i]).collect();
    v.sort_unstable();
    v
}

/// Random-sampling estimate of the threshold.
///
/// Trial `t` of the `i`-th candidate size uses the generator seeded with
/// `seed ^ (i·trials + t)`.
pub fn sampled_threshold(modulus: Modulus, restriction: Restriction, cfg: &ExperimentConfig) -> Result<ThresholdRecord> {
    let universe = restriction.universe(modulus);
    let candidates = cfg.sizes.sizes(modulus, universe.len());
    let trials = cfg.trials;

    let mut sizes = Vec::with_capacity(candidates.len());
    let mut firsts = Vec::with_capacity(candidates.len());
    for (i, &size) in candidates.iter().enumerate() {
        let outcomes = run_indexed(cfg.jobs, trials, |t| {
            let mut rng = cfg.rng((i * trials + t) as u64);
            let set = random_subset(&mut rng, &universe, size);
            let a = CyclicSet::new(modulus, set.iter().copied()).expect("universe elements are valid");
            (!is_complete(&a).complete).then_some(set)
        })?;
        let incomplete = outcomes.iter().filter(|o| o.is_some()).count() as u64;
        sizes.push(SizeTally {
            size,
            checked: trials as u64,
            complete: trials as u64 - incomplete,
            incomplete,
        });
        firsts.push(outcomes.into_iter().flatten().next());
    }

    let m_star = match sizes.iter().rposition(|t| t.incomplete > 0) {
        None => candidates.first().copied(),
        Some(i) => candidates.get(i + 1).copied(),
    };
    let max_incomplete = firsts.into_iter().rev().flatten().next();
    let record = ThresholdRecord {
        n: modulus.get(),
        restriction,
        mode: SearchMode::Sampled,
        m_star,
        max_incomplete,
        sizes,
        evaluations: (candidates.len() * trials) as u64,
        trials: Some(trials),
        seed: Some(cfg.seed),
    };
    verify_record(modulus, &record);
    Ok(record)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    SmallSum,
    Divisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalFamily {
    pub kind: FamilyKind,
    pub set: CyclicSet,
    pub missing: Vec<u64>,
}

fn certify(kind: FamilyKind, set: CyclicSet) -> ExtremalFamily {
    let verdict = is_complete(&set);
    assert!(!verdict.complete, "{kind:?} family is complete for n = {}", set.modulus());
    ExtremalFamily {
        kind,
        set,
        missing: verdict.missing,
    }
}

/// `{1, …, k}` with `k` maximal such that `k(k+1)/2 ≤ n − 2`; residue `n − 1`
/// is then out of reach.
pub fn small_sum_family(modulus: Modulus) -> ExtremalFamily {
    let n = modulus.get();
    let mut k = 0u64;
    while (k + 1) * (k + 2) / 2 + 2 <= n {
        k += 1;
    }
    let set = CyclicSet::new(modulus, 1..=k).expect("1..=k are distinct nonzero residues");
    certify(FamilyKind::SmallSum, set)
}

/// `{1} ∪ {3, 6, …, n − 3}` for `3 | n`: every subset sum is 0 or 1 mod 3.
pub fn divisor_family(modulus: Modulus) -> Result<ExtremalFamily> {
    let n = modulus.get();
    if n % 3 != 0 {
        return Err(Error::NotDivisible { n, divisor: 3 });
    }
    let set = CyclicSet::new(modulus, std::iter::once(1).chain((3..n).step_by(3)))?;
    debug_assert_eq!(set.len() as u64, n / 3);
    Ok(certify(FamilyKind::Divisor, set))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiderrichReport {
    pub n: u64,
    pub smallest_prime: u64,
    /// `p + n/p − 2`.
    pub reference: u64,
    pub m_star: Option<usize>,
    pub max_incomplete_size: usize,
    /// Reading "size ≥ reference forces completeness" as the threshold.
    pub threshold_equals_reference: bool,
    /// Reading "reference is the largest incomplete size".
    pub max_incomplete_equals_reference: bool,
    pub record: ThresholdRecord,
}

pub fn diderrich_probe(modulus: Modulus, budget: u64) -> Result<DiderrichReport> {
    let n = modulus.get();
    let p = modulus.smallest_prime_factor();
    if p == n {
        return Err(Error::NotComposite(n));
    }
    let reference = p + n / p - 2;
    let record = exact_threshold(modulus, Restriction::Nonzero, ExactConfig::with_budget(budget))?;
    let max_incomplete_size = record.max_incomplete.as_ref().map_or(0, Vec::len);
    Ok(DiderrichReport {
        n,
        smallest_prime: p,
        reference,
        m_star: record.m_star,
        max_incomplete_size,
        threshold_equals_reference: record.m_star == Some(reference as usize),
        max_incomplete_equals_reference: max_incomplete_size as u64 == reference,
        record,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub n: u64,
    pub c: f64,
    pub size: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Successful trials whose progression has difference 1.
    pub unit_difference: usize,
    pub min_longest: u64,
}

/// For each `c`, draws `A ⊆ {1, …, n}` with `|A| = ⌈c√n⌉` and checks whether
/// the integer subset sums contain an AP of length `n`.
pub fn corollary_experiment(n: u64, c_values: &[f64], cfg: &ExperimentConfig) -> Result<Vec<CorollaryRow>> {
    if n < 2 {
        return Err(Error::InvalidModulus(n));
    }
    let universe: Vec<u64> = (1..=n).collect();
    let trials = cfg.trials;
    c_values
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidInput(format!("ratio must be positive, got {c}")));
            }
            let size = ceil_sqrt_multiple(c, n).min(n as usize);
            let outcomes = run_indexed(cfg.jobs, trials, |t| {
                let mut rng = cfg.rng((i * trials + t) as u64);
                let a = random_subset(&mut rng, &universe, size);
                let sums = integer_subset_sums(&a);
                longest_ap(&sums, &APSearchConfig::new(n)).expect("sumset contains 0")
            })?;
            let successes = outcomes.iter().filter(|r| r.length >= n).count();
            Ok(CorollaryRow {
                n,
                c,
                size,
                trials,
                successes,
                success_rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
                unit_difference: outcomes.iter().filter(|r| r.length >= n && r.difference == 1).count(),
                min_longest: outcomes.iter().map(|r| r.length).min().unwrap_or(0),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed: u64,
    pub cases: usize,
    pub n_min: u64,
    pub n_max: u64,
    /// `|A| = ⌈size_factor·√n⌉`; moduli with fewer units are skipped.
    pub size_factor: f64,
    pub targets: usize,
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 50,
            n_min: 200,
            n_max: 5000,
            size_factor: 8.0,
            targets: 20,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineCase {
    pub n: u64,
    pub size: usize,
    pub split: Option<usize>,
    pub d_prime: Option<u64>,
    pub d: Option<u64>,
    pub targets: usize,
    /// Targets for which the decomposition produced a verified witness.
    pub pipeline_ok: usize,
    /// Targets confirmed reachable by the DP table.
    pub reachable: usize,
    /// Returned traces that satisfied the consistency checks.
    pub consistent_traces: usize,
    pub traces: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub cases: Vec<PipelineCase>,
    pub total_targets: usize,
    pub pipeline_ok: usize,
    pub reachable: usize,
    pub pipeline_rate: f64,
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Picks distinct composite moduli in range with enough units, as in the
/// decomposition acceptance run.
pub fn pipeline_moduli(cfg: &PipelineConfig) -> Result<Vec<u64>> {
    if cfg.n_min < 4 || cfg.n_max < cfg.n_min {
        return Err(Error::InvalidInput("bad modulus range".into()));
    }
    let admissible = |n: u64| {
        let m = Modulus::new(n).expect("n >= 4");
        !m.is_prime() && euler_phi(n) as usize >= ceil_sqrt_multiple(cfg.size_factor, n)
    };
    let pool: Vec<u64> = (cfg.n_min..=cfg.n_max).filter(|&n| admissible(n)).collect();
    if pool.len() < cfg.cases {
        return Err(Error::InvalidInput(format!(
            "only {} admissible moduli in range",
            pool.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked: Vec<u64> = sample(&mut rng, pool.len(), cfg.cases).into_iter().map(|i| pool[i]).collect();
    picked.sort_unstable();
    Ok(picked)
}

fn run_case(index: usize, n: u64, cfg: &PipelineConfig) -> PipelineCase {
    let modulus = Modulus::new(n).expect("n >= 4");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let units = modulus.units();
    let size = ceil_sqrt_multiple(cfg.size_factor, n);
    let set = CyclicSet::coprime(modulus, random_subset(&mut rng, &units, size)).expect("units are coprime");
    let targets: Vec<u64> = (0..cfg.targets).map(|_| rng.gen_range(0..n)).collect();

    let table = SubsetSumTable::build(&set);
    let reachable = targets
        .iter()
        .filter(|&&t| table.witness(t).is_ok_and(|w| w.verify(set.elements())))
        .count();

    let mut case = PipelineCase {
        n,
        size,
        split: None,
        d_prime: None,
        d: None,
        targets: targets.len(),
        pipeline_ok: 0,
        reachable,
        consistent_traces: 0,
        traces: 0,
        error: None,
    };
    let decomposer = Decomposer::new(&set, &DecomposeConfig::default());
    if let Ok(dec) = &decomposer {
        case.split = Some(dec.split());
        case.d_prime = Some(dec.ap().difference);
        case.d = Some(dec.d());
    }
    for &t in &targets {
        let result = if t == 0 {
            crate::constructive::olson_decompose(&set, 0, &DecomposeConfig::default())
        } else {
            match &decomposer {
                Ok(dec) => dec.decompose(t),
                Err(e) => Err(e.clone()),
            }
        };
        match result {
            Ok(out) => {
                if out.witness.target == t && out.witness.verify(set.elements()) {
                    case.pipeline_ok += 1;
                }
                if let Some(trace) = out.trace {
                    case.traces += 1;
                    let part_b = trace.b.elements();
                    let cover_has_s = (part_b.is_empty() && trace.combination.s == 0)
                        || crate::sumset::cyclic_subset_sums(&trace.b, Default::default()).contains(trace.combination.s);
                    if trace.is_consistent(modulus) && cover_has_s && trace.d == trace.d_prime.gcd(&n) {
                        case.consistent_traces += 1;
                    }
                }
            }
            Err(e) => case.error = Some(e.to_string()),
        }
    }
    case
}

/// Runs the decomposition pipeline over random composite moduli and targets,
/// cross-checking reachability with the DP table.
pub fn pipeline_experiment(cfg: &PipelineConfig) -> Result<PipelineReport> {
    let moduli = pipeline_moduli(cfg)?;
    let cases = run_indexed(cfg.jobs, moduli.len(), |i| run_case(i, moduli[i], cfg))?;
    let total_targets = cases.iter().map(|c| c.targets).sum();
    let pipeline_ok = cases.iter().map(|c| c.pipeline_ok).sum();
    let reachable = cases.iter().map(|c| c.reachable).sum();
    Ok(PipelineReport {
        config: cfg.clone(),
        cases,
        total_targets,
        pipeline_ok,
        reachable,
        pipeline_rate: if total_targets == 0 {
            0.0
        } else {
            pipeline_ok as f64 / total_targets as f64
        },
    })
}
