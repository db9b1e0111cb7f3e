//! Sums of weighted-configuration evaluations.
//!
//! A weighted configuration with blocks `S_1..S_r`, block sums `t_i` and
//! weights `w_i` evaluates to `(-1)^r / r * Π P_{w_i}(t_i)`. The identity
//! under test is that these evaluations sum to zero over all weighted
//! configurations of a ground set of size `g` with total weight
//! `w <= g - 2`.
//!
//! Two summation paths exist. [`sum_ordered`] walks every ordered
//! configuration and evaluates the formula literally. [`sum_collapsed`]
//! walks unordered partitions only: the evaluation does not depend on block
//! order, so each unordered partition with `r` blocks stands for `r!`
//! ordered ones and carries the factor `(-1)^r (r-1)!`.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::rational::{factorial_rational, sign_power, to_ratio_string};
use crate::algebra::{int, ratio, MultiPoly, Rational};
use crate::configurations::{
    count_collapsed_items, full_mask, split_handles, weight_compositions, Block, Configuration, GroundSet,
    OrderedPartitions, SetPartitions, WeightedConfiguration,
};
use crate::error::{Error, Result};
use crate::stirling::{eval_p, eval_p_symbolic, StirlingTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Numeric,
    Symbolic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Numeric => "numeric",
            Mode::Symbolic => "symbolic",
        })
    }
}

/// A sum or evaluation: an exact rational, or a polynomial in `c1..cg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Rational(Rational),
    Poly(MultiPoly),
}

impl Value {
    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rational(q) => q.is_zero(),
            Value::Poly(p) => p.is_zero(),
        }
    }

    /// `num/den` for rationals; sorted canonical terms joined by ` + ` for
    /// polynomials (`0` when empty).
    pub fn to_record_string(&self) -> String {
        match self {
            Value::Rational(q) => to_ratio_string(q),
            Value::Poly(p) if p.is_zero() => "0".to_string(),
            Value::Poly(p) => p.canonical_terms().join(" + "),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Zero,
    Nonzero,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "zero",
            Verdict::Nonzero => "nonzero",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part1Instance {
    g: usize,
    w: usize,
    ground: GroundSet,
}

impl Part1Instance {
    pub fn new(ground: GroundSet, w: usize) -> Result<Self> {
        let g = ground.g();
        if g < 2 {
            return Err(Error::InvalidInstance(format!("g = {g}, need g >= 2")));
        }
        if w + 2 > g {
            return Err(Error::InvalidInstance(format!("w = {w} outside 0..={}", g - 2)));
        }
        Ok(Part1Instance { g, w, ground })
    }

    /// Any `w`, for calibration runs outside the conjectured range.
    pub fn calibration(ground: GroundSet, w: usize) -> Self {
        Part1Instance { g: ground.g(), w, ground }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn mode(&self) -> Mode {
        if self.ground.is_symbolic() {
            Mode::Symbolic
        } else {
            Mode::Numeric
        }
    }

    pub fn in_conjectured_range(&self) -> bool {
        self.g >= 2 && self.w + 2 <= self.g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumPath {
    Ordered,
    Collapsed,
}

impl fmt::Display for SumPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumPath::Ordered => "ordered",
            SumPath::Collapsed => "collapsed",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Part1Result {
    pub instance: Part1Instance,
    pub path: SumPath,
    pub sum: Value,
    /// Weighted items visited: (configuration, weight vector) pairs.
    pub configurations_visited: u64,
    /// Distinct (ordered or unordered) partitions visited.
    pub partitions_visited: u64,
    pub elapsed: Duration,
    pub verdict: Verdict,
}

/// Literal evaluation of one weighted configuration.
pub fn evaluate(wc: &WeightedConfiguration, ground: &GroundSet) -> Result<Value> {
    let cfg = &wc.config;
    if cfg.g() != ground.g() {
        return Err(Error::InvalidInstance("configuration and ground set sizes differ".into()));
    }
    let r = cfg.r();
    let factor = sign_power(r) * ratio(1, r as i64);
    match ground {
        GroundSet::Numeric(_) => {
            let mut acc = factor;
            for (&b, &wi) in cfg.blocks().iter().zip(&wc.weights) {
                acc *= eval_p(wi, &ground.block_sum_numeric(b).expect("numeric"))?;
            }
            Ok(Value::Rational(acc))
        }
        GroundSet::Symbolic(_) => {
            let mut acc = MultiPoly::constant(factor);
            for (&b, &wi) in cfg.blocks().iter().zip(&wc.weights) {
                acc = &acc * &eval_p_symbolic(wi, &ground.block_sum(b))?;
            }
            Ok(Value::Poly(acc))
        }
    }
}

/// The exact-arithmetic operations the summation loops need.
trait Exact: Clone + Send + Sync {
    fn exact_zero() -> Self;
    fn vanishes(&self) -> bool;
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_scaled(&mut self, other: &Self, c: &Rational);
    fn add(&mut self, other: &Self);
    fn into_value(self) -> Value;
}

impl Exact for Rational {
    fn exact_zero() -> Self {
        Zero::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += other * c;
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn into_value(self) -> Value {
        Value::Rational(self)
    }
}

impl Exact for MultiPoly {
    fn exact_zero() -> Self {
        MultiPoly::zero()
    }
    fn vanishes(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += &other.scale(c);
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn into_value(self) -> Value {
        Value::Poly(self)
    }
}

/// `P_k(t_B)` for every block mask `B` and weight `k <= w`.
struct BlockTable<T> {
    values: Vec<Vec<T>>,
}

impl<T: Exact> BlockTable<T> {
    fn build(g: usize, w: usize, f: impl Fn(usize, Block) -> T) -> Self {
        let masks = full_mask(g) as usize + 1;
        let values = (0..=w).map(|k| (0..masks).map(|m| f(k, m as Block)).collect()).collect();
        BlockTable { values }
    }

    fn get(&self, k: usize, block: Block) -> &T {
        &self.values[k][block as usize]
    }
}

#[derive(Default, Clone, Copy)]
struct Visits {
    items: u64,
    partitions: u64,
}

fn accumulate<T: Exact>(
    configs: impl Iterator<Item = Configuration>,
    w: usize,
    table: &BlockTable<T>,
    weight_of_r: &[Rational],
) -> (T, Visits) {
    let mut acc = T::exact_zero();
    let mut visits = Visits::default();
    for cfg in configs {
        visits.partitions += 1;
        let blocks = cfg.blocks();
        let coeff = &weight_of_r[blocks.len()];
        for weights in weight_compositions(w, blocks.len()) {
            visits.items += 1;
            let mut prod = table.get(weights[0], blocks[0]).clone();
            for (&b, &k) in blocks.iter().zip(&weights).skip(1) {
                if prod.vanishes() {
                    break;
                }
                prod = prod.mul_ref(table.get(k, b));
            }
            if !prod.vanishes() {
                acc.add_scaled(&prod, coeff);
            }
        }
    }
    (acc, visits)
}

fn run_path<T: Exact>(g: usize, w: usize, path: SumPath, table: &BlockTable<T>, jobs: usize) -> Result<(T, Visits)> {
    // Per-configuration factor indexed by block count r.
    let weight_of_r: Vec<Rational> = (0..=g)
        .map(|r| match (r, path) {
            (0, _) => Rational::zero(),
            (r, SumPath::Ordered) => sign_power(r) * ratio(1, r as i64),
            (r, SumPath::Collapsed) => sign_power(r) * factorial_rational((r - 1) as u64),
        })
        .collect();

    let stream = |handle: Option<Block>| -> Box<dyn Iterator<Item = Configuration>> {
        match (path, handle) {
            (SumPath::Ordered, None) => Box::new(OrderedPartitions::new(g)),
            (SumPath::Ordered, Some(h)) => Box::new(OrderedPartitions::with_block_of_first(g, h)),
            (SumPath::Collapsed, None) => Box::new(SetPartitions::new(g)),
            (SumPath::Collapsed, Some(h)) => Box::new(SetPartitions::with_block_of_first(g, h)),
        }
    };

    if jobs <= 1 {
        return Ok(accumulate(stream(None), w, table, &weight_of_r));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    let partials: Vec<(T, Visits)> = pool.install(|| {
        split_handles(g).into_par_iter().map(|h| accumulate(stream(Some(h)), w, table, &weight_of_r)).collect()
    });
    let mut acc = T::exact_zero();
    let mut visits = Visits::default();
    for (part, v) in &partials {
        acc.add(part);
        visits.items += v.items;
        visits.partitions += v.partitions;
    }
    Ok((acc, visits))
}

fn sum_with(inst: &Part1Instance, path: SumPath, jobs: usize) -> Result<Part1Result> {
    let start = Instant::now();
    let (g, w) = (inst.g, inst.w);
    let polys = StirlingTable::up_to(w)?;
    let (sum, visits) = match &inst.ground {
        GroundSet::Numeric(_) => {
            let table = BlockTable::build(g, w, |k, b| match inst.ground.block_sum_numeric(b) {
                Some(t) if b != 0 => polys.eval(k, &t),
                _ => Rational::zero(),
            });
            let (s, v) = run_path(g, w, path, &table, jobs)?;
            (s.into_value(), v)
        }
        GroundSet::Symbolic(_) => {
            let table = BlockTable::build(g, w, |k, b| {
                if b == 0 {
                    MultiPoly::zero()
                } else {
                    polys.eval_symbolic(k, &inst.ground.block_sum(b))
                }
            });
            let (s, v) = run_path(g, w, path, &table, jobs)?;
            (s.into_value(), v)
        }
    };
    let verdict = if sum.is_zero() { Verdict::Zero } else { Verdict::Nonzero };
    Ok(Part1Result {
        instance: inst.clone(),
        path,
        sum,
        configurations_visited: visits.items,
        partitions_visited: visits.partitions,
        elapsed: start.elapsed(),
        verdict,
    })
}

/// Literal sum over every ordered weighted configuration.
pub fn sum_ordered(inst: &Part1Instance, jobs: usize) -> Result<Part1Result> {
    sum_with(inst, SumPath::Ordered, jobs)
}

/// Sum over unordered partitions with the `(-1)^r (r-1)!` collapse factor.
pub fn sum_collapsed(inst: &Part1Instance, jobs: usize) -> Result<Part1Result> {
    sum_with(inst, SumPath::Collapsed, jobs)
}

/// Seeded ground set of `g` distinct rationals. `stream` separates
/// independent draws under one seed. Every third stream draws integers
/// only; the others mix integers and fractions. Negatives occur in both.
/// Zero is never drawn.
pub fn random_ground_set(g: usize, seed: u64, stream: u64) -> Result<GroundSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let integers_only = stream % 3 == 0;
    let mut values: Vec<Rational> = Vec::with_capacity(g);
    while values.len() < g {
        let num: i64 = rng.gen_range(-40..=40);
        let den: i64 = if integers_only { 1 } else { rng.gen_range(1..=6) };
        let q = ratio(num, den);
        if num != 0 && !values.contains(&q) {
            values.push(q);
        }
    }
    GroundSet::numeric(values)
}

/// Stream id for the `sample`-th random ground set of instance `(g, w)`.
pub fn sample_stream(g: usize, w: usize, sample: usize) -> u64 {
    ((g as u64) << 40) | ((w as u64) << 20) | sample as u64
}

/// `g <= 6` with any `w`, or `g = 7` with `w <= 3`.
pub fn in_published_range(g: usize, w: usize) -> bool {
    g <= 6 || (g == 7 && w <= 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Inside the published verified range; a nonzero verdict fails the run.
    Asserted,
    /// Outside it; recorded, never affects the exit status.
    Exploratory,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Asserted => "asserted",
            Classification::Exploratory => "exploratory",
        })
    }
}

pub fn classify(g: usize, w: usize) -> Classification {
    if in_published_range(g, w) {
        Classification::Asserted
    } else {
        Classification::Exploratory
    }
}

/// Follow-up for a nonzero sum.
#[derive(Clone, Debug)]
pub struct Recheck {
    pub ordered: Part1Result,
    pub ordered_agrees: bool,
    /// Numeric mode only: the collapsed sum at a second random ground set.
    pub second_ground: Option<Part1Result>,
}

impl Recheck {
    /// The nonzero sum survived the independent ordered path and, where
    /// applicable, is nonzero at a second ground set too.
    pub fn confirmed(&self) -> bool {
        self.ordered_agrees
            && self.ordered.verdict == Verdict::Nonzero
            && self.second_ground.as_ref().is_none_or(|r| r.verdict == Verdict::Nonzero)
    }
}

/// Re-runs a nonzero result via the ordered path and, in numeric mode, at
/// a second seeded ground set.
pub fn double_check(result: &Part1Result, seed: u64, jobs: usize) -> Result<Recheck> {
    let inst = &result.instance;
    let ordered = sum_ordered(inst, jobs)?;
    let ordered_agrees = ordered.sum == result.sum;
    let second_ground = match inst.mode() {
        Mode::Symbolic => None,
        Mode::Numeric => {
            let ground = random_ground_set(inst.g, seed ^ 0x5eed_5eed, sample_stream(inst.g, inst.w, 1 << 19))?;
            let second = Part1Instance::calibration(ground, inst.w);
            Some(sum_collapsed(&second, jobs)?)
        }
    };
    Ok(Recheck { ordered, ordered_agrees, second_ground })
}

#[derive(Clone, Debug, Default)]
pub struct Budget {
    /// Skip instances whose collapsed item count exceeds this.
    pub max_items: Option<u64>,
    /// Stop starting new instances after this much wall time.
    pub time_limit: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct SweepPlan {
    pub g_min: usize,
    pub g_max: usize,
    /// `None` runs every `w` in `0..=g-2`.
    pub ws: Option<Vec<usize>>,
    /// Symbolic ground sets for `g` up to this; seeded numeric ones above.
    pub symbolic_max_g: usize,
    /// Numeric samples per `(g, w)`; `None` uses 10 for `g <= 6`, 5 above.
    pub samples: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
    pub budget: Budget,
}

impl SweepPlan {
    pub fn new(g_max: usize) -> Self {
        SweepPlan {
            g_min: 2,
            g_max,
            ws: None,
            symbolic_max_g: 5,
            samples: None,
            seed: 0,
            jobs: 1,
            budget: Budget::default(),
        }
    }

    fn samples_for(&self, g: usize) -> usize {
        self.samples.unwrap_or(if g <= 6 { 10 } else { 5 })
    }

    /// The `(g, w, ground, sample index)` list in run order.
    pub fn instances(&self) -> Result<Vec<(Part1Instance, Option<usize>)>> {
        let mut out = Vec::new();
        for g in self.g_min.max(2)..=self.g_max {
            let ws: Vec<usize> = match &self.ws {
                None => (0..=g - 2).collect(),
                Some(ws) => ws.iter().copied().filter(|&w| w + 2 <= g).collect(),
            };
            for w in ws {
                if g <= self.symbolic_max_g {
                    out.push((Part1Instance::new(GroundSet::symbolic(g)?, w)?, None));
                } else {
                    for s in 0..self.samples_for(g) {
                        let ground = random_ground_set(g, self.seed, sample_stream(g, w, s))?;
                        out.push((Part1Instance::new(ground, w)?, Some(s)));
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub enum SweepOutcome {
    Completed { result: Part1Result, recheck: Option<Recheck> },
    NotAttempted { reason: String },
}

#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub g: usize,
    pub w: usize,
    pub sample: Option<usize>,
    pub ground: GroundSet,
    pub classification: Classification,
    pub outcome: SweepOutcome,
}

impl SweepEntry {
    pub fn verdict(&self) -> Option<Verdict> {
        match &self.outcome {
            SweepOutcome::Completed { result, .. } => Some(result.verdict),
            SweepOutcome::NotAttempted { .. } => None,
        }
    }
}

/// Runs one instance with the production path and the nonzero follow-up.
pub fn run_instance(inst: &Part1Instance, seed: u64, jobs: usize) -> Result<(Part1Result, Option<Recheck>)> {
    let result = sum_collapsed(inst, jobs)?;
    let recheck = match result.verdict {
        Verdict::Zero => None,
        Verdict::Nonzero => Some(double_check(&result, seed, jobs)?),
    };
    Ok((result, recheck))
}

/// Runs a sweep, calling `on_entry` as each instance finishes. Instances
/// skipped for budget reasons are reported as `NotAttempted`.
pub fn verify_range_with(plan: &SweepPlan, mut on_entry: impl FnMut(&SweepEntry)) -> Result<Vec<SweepEntry>> {
    if plan.g_max < 2 {
        return Err(Error::InvalidParameters(format!("g_max = {} (need >= 2)", plan.g_max)));
    }
    let start = Instant::now();
    let mut entries = Vec::new();
    for (inst, sample) in plan.instances()? {
        let (g, w) = (inst.g, inst.w);
        let over_items = plan.budget.max_items.is_some_and(|m| count_collapsed_items(g, w) > m.into());
        let over_time = plan.budget.time_limit.is_some_and(|t| start.elapsed() > t);
        let outcome = if over_items {
            SweepOutcome::NotAttempted { reason: "item budget exceeded".into() }
        } else if over_time {
            SweepOutcome::NotAttempted { reason: "time budget exhausted".into() }
        } else {
            let (result, recheck) = run_instance(&inst, plan.seed, plan.jobs)?;
            SweepOutcome::Completed { result, recheck }
        };
        let entry = SweepEntry { g, w, sample, ground: inst.ground.clone(), classification: classify(g, w), outcome };
        on_entry(&entry);
        entries.push(entry);
    }
    Ok(entries)
}

pub fn verify_range(plan: &SweepPlan) -> Result<Vec<SweepEntry>> {
    verify_range_with(plan, |_| {})
}

pub fn integer_ground(values: &[i64]) -> Result<GroundSet> {
    GroundSet::numeric(values.iter().map(|&v| int(v)).collect())
}
