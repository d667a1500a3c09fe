//! Real-coded genetic algorithm over network chromosomes.
//!
//! One generation: evaluate every unevaluated individual, record the best,
//! copy it unchanged into the next population, fill the rest by roulette
//! selection on inverted fitness, arithmetic crossover of consecutive
//! parent pairs and annealed single-gene mutation.
//!
//! Fitness evaluations are pure functions of (chromosome, stream seed), and
//! the stream seed depends only on (master seed, generation, index). An
//! [`Executor`] may therefore run a batch in any order or in parallel
//! without changing the result.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::features::Dataset;
use crate::network::{
    decode, fitness_error, train_bp, Activation, BpConfig, Chromosome, GeneBounds, NetShape,
    Network, NetworkError, SampleSet,
};
use crate::rng::{derive_stream_seed, seeded_rng};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("fitness of individual {index} is {value}; expected a non-negative number")]
    InvalidFitness { index: usize, value: f64 },
    #[error("selection coefficient k must be positive, got {0}")]
    InvalidCoefficient(f64),
    #[error("chromosomes differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Sign convention of the `r > 0.5` mutation branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum MutationVariant {
    /// `m + (m - m_max) f(g)` for `r > 0.5`, as originally written.
    #[default]
    Paper,
    /// `m + (m_max - m) f(g)` for `r > 0.5` (textbook non-uniform mutation).
    Standard,
}

impl fmt::Display for MutationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationVariant::Paper => "paper",
            MutationVariant::Standard => "standard",
        })
    }
}

impl FromStr for MutationVariant {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(MutationVariant::Paper),
            "standard" => Ok(MutationVariant::Standard),
            _ => Err("expected `paper` or `standard`"),
        }
    }
}

/// How the second child's blend reads the first child's gene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CrossoverMode {
    /// Both children blend the pre-crossover genes.
    #[default]
    Simultaneous,
    /// The second child blends with the already-updated first child gene.
    Sequential,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct GaConfig {
    pub pop_size: usize,
    /// `k_max`: number of generations evaluated.
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub bounds: GeneBounds,
    pub fitness_bp_epochs: usize,
    pub fitness_bp_lr: f64,
    /// Coefficient `k` in both the fitness and the selection weight.
    pub fitness_k: f64,
    pub seed: u64,
    pub mutation_variant: MutationVariant,
    pub crossover_mode: CrossoverMode,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            pop_size: 40,
            generations: 30,
            crossover_prob: 0.7,
            mutation_prob: 0.1,
            bounds: GeneBounds::default(),
            fitness_bp_epochs: 10,
            fitness_bp_lr: crate::network::DEFAULT_LR,
            fitness_k: 1.0,
            seed: 0,
            mutation_variant: MutationVariant::Paper,
            crossover_mode: CrossoverMode::Simultaneous,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), EvolveError> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if self.pop_size < 2 {
            return Err(EvolveError::InvalidConfig("population size must be at least 2"));
        }
        if self.generations < 1 {
            return Err(EvolveError::InvalidConfig("generations must be at least 1"));
        }
        if !unit(self.crossover_prob) || !unit(self.mutation_prob) {
            return Err(EvolveError::InvalidConfig("probabilities must lie in [0, 1]"));
        }
        GeneBounds::new(self.bounds.min, self.bounds.max)?;
        if !(self.fitness_k > 0.0) {
            return Err(EvolveError::InvalidCoefficient(self.fitness_k));
        }
        if self.fitness_bp_epochs > 0 && !(self.fitness_bp_lr > 0.0) {
            return Err(EvolveError::InvalidConfig("fitness learning rate must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub fitness: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationBest {
    pub generation: usize,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaRun {
    pub best_per_generation: Vec<GenerationBest>,
    pub final_best: Individual,
    pub config: GaConfig,
    pub evaluations: usize,
}

/// Error to minimise. Must be a pure function of its arguments.
pub trait Fitness: Sync {
    fn evaluate(&self, chromosome: &Chromosome, stream_seed: u64) -> f64;
}

impl<F> Fitness for F
where
    F: Fn(&Chromosome, u64) -> f64 + Sync,
{
    fn evaluate(&self, chromosome: &Chromosome, stream_seed: u64) -> f64 {
        self(chromosome, stream_seed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalJob<'a> {
    pub index: usize,
    pub chromosome: &'a Chromosome,
    pub stream_seed: u64,
}

/// Runs a batch of fitness evaluations, returning results in job order.
pub trait Executor {
    fn evaluate_batch<F: Fitness + ?Sized>(&self, fitness: &F, jobs: &[EvalJob<'_>]) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn evaluate_batch<F: Fitness + ?Sized>(&self, fitness: &F, jobs: &[EvalJob<'_>]) -> Vec<f64> {
        jobs.iter()
            .map(|j| fitness.evaluate(j.chromosome, j.stream_seed))
            .collect()
    }
}

pub fn init_population<R: Rng + ?Sized>(cfg: &GaConfig, gene_len: usize, rng: &mut R) -> Vec<Chromosome> {
    (0..cfg.pop_size)
        .map(|_| Chromosome::random(gene_len, cfg.bounds, rng))
        .collect()
}

/// Roulette probabilities `p_i = (k/G_i) / sum_j (k/G_j)`.
///
/// Individuals with `G_i = 0` share all the probability mass uniformly.
/// Infinite `G_i` gets probability zero; if every `G_i` is infinite the
/// distribution is uniform.
pub fn selection_probs(fitnesses: &[f64], k: f64) -> Result<Vec<f64>, EvolveError> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(EvolveError::InvalidCoefficient(k));
    }
    if let Some((index, &value)) = fitnesses.iter().enumerate().find(|(_, g)| !(**g >= 0.0)) {
        return Err(EvolveError::InvalidFitness { index, value });
    }
    let n = fitnesses.len();
    let zeros = fitnesses.iter().filter(|&&g| g == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        return Ok(fitnesses.iter().map(|&g| if g == 0.0 { share } else { 0.0 }).collect());
    }
    let weights: Vec<f64> = fitnesses.iter().map(|&g| k / g).collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Ok(alloc::vec![1.0 / n as f64; n]);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// `count` independent draws with replacement.
pub fn roulette_select<R: Rng + ?Sized>(probs: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let last_live = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cumulative.partition_point(|&c| c <= u).min(last_live)
        })
        .collect()
}

/// Arithmetic crossover at gene `q` with blend coefficient `blend` in [0, 1].
pub fn crossover_at(
    a: &Chromosome,
    b: &Chromosome,
    q: usize,
    blend: f64,
    mode: CrossoverMode,
) -> Result<(Chromosome, Chromosome), EvolveError> {
    if a.len() != b.len() {
        return Err(EvolveError::LengthMismatch(a.len(), b.len()));
    }
    let (ga, gb) = (a.genes()[q], b.genes()[q]);
    let (lo, hi) = if ga <= gb { (ga, gb) } else { (gb, ga) };
    let first = (ga * (1.0 - blend) + gb * blend).clamp(lo, hi);
    let partner = match mode {
        CrossoverMode::Simultaneous => ga,
        CrossoverMode::Sequential => first,
    };
    let second = (gb * (1.0 - blend) + partner * blend).clamp(lo, hi);
    let mut ca = a.clone();
    let mut cb = b.clone();
    ca.set_clamped(q, first);
    cb.set_clamped(q, second);
    Ok((ca, cb))
}

pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    mode: CrossoverMode,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome), EvolveError> {
    if a.len() != b.len() {
        return Err(EvolveError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Ok((a.clone(), b.clone()));
    }
    let q = rng.random_range(0..a.len());
    let blend = rng.random::<f64>();
    crossover_at(a, b, q, blend, mode)
}

/// `f(g) = r2 (1 - k/k_max)^2`.
pub fn annealing_factor(r2: f64, generation: usize, k_max: usize) -> f64 {
    let frac = 1.0 - (generation as f64 / k_max as f64).min(1.0);
    r2 * frac * frac
}

/// Mutated value of one gene before clamping is applied to the bounds.
pub fn mutate_gene(
    gene: f64,
    r: f64,
    r2: f64,
    generation: usize,
    k_max: usize,
    bounds: GeneBounds,
    variant: MutationVariant,
) -> f64 {
    let f = annealing_factor(r2, generation, k_max);
    let moved = if r > 0.5 {
        match variant {
            MutationVariant::Paper => gene + (gene - bounds.max) * f,
            MutationVariant::Standard => gene + (bounds.max - gene) * f,
        }
    } else {
        gene + (bounds.min - gene) * f
    };
    bounds.clamp(moved)
}

/// Mutates one uniformly chosen gene at generation `generation`.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, generation: usize, cfg: &GaConfig, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    if c.is_empty() {
        return out;
    }
    let j = rng.random_range(0..c.len());
    let r = rng.random::<f64>();
    let r2 = rng.random::<f64>();
    let bounds = c.bounds();
    let v = mutate_gene(c.genes()[j], r, r2, generation, cfg.generations, bounds, cfg.mutation_variant);
    out.set_clamped(j, v);
    out
}

/// Decode, train briefly with full-batch BP, then score the training error.
#[derive(Debug, Clone, Copy)]
pub struct BpFitness<'a> {
    pub samples: &'a SampleSet,
    pub shape: NetShape,
    pub activation: Activation,
    pub epochs: usize,
    pub lr: f64,
    pub k: f64,
}

impl<'a> BpFitness<'a> {
    pub fn new(samples: &'a SampleSet, shape: NetShape, activation: Activation, cfg: &GaConfig) -> Self {
        Self {
            samples,
            shape,
            activation,
            epochs: cfg.fitness_bp_epochs,
            lr: cfg.fitness_bp_lr,
            k: cfg.fitness_k,
        }
    }

    /// Full-batch training is deterministic, so the stream seed is unused.
    pub fn score(&self, chromosome: &Chromosome) -> Result<f64, NetworkError> {
        let net = decode(chromosome, self.shape, self.activation)?;
        let net = if self.epochs == 0 {
            net
        } else {
            match train_bp(&net, self.samples, BpConfig { lr: self.lr, epochs: self.epochs }) {
                Ok((trained, _)) => trained,
                Err(NetworkError::NonFiniteLoss { .. }) => return Ok(f64::INFINITY),
                Err(e) => return Err(e),
            }
        };
        let g = fitness_error(&net, self.samples, self.k)?;
        Ok(if g.is_finite() { g } else { f64::INFINITY })
    }
}

impl Fitness for BpFitness<'_> {
    fn evaluate(&self, chromosome: &Chromosome, _stream_seed: u64) -> f64 {
        self.score(chromosome).unwrap_or(f64::INFINITY)
    }
}

fn sanitize(g: f64) -> f64 {
    if g.is_nan() || g < 0.0 {
        f64::INFINITY
    } else {
        g
    }
}

fn argmin(fitness: &[f64]) -> usize {
    let mut best = 0;
    for (i, &g) in fitness.iter().enumerate() {
        if g < fitness[best] {
            best = i;
        }
    }
    best
}

pub fn run_ga<F, E>(fitness: &F, gene_len: usize, cfg: &GaConfig, exec: &E) -> Result<GaRun, EvolveError>
where
    F: Fitness + ?Sized,
    E: Executor,
{
    cfg.validate()?;
    let mut rng = seeded_rng(cfg.seed);
    let mut population = init_population(cfg, gene_len, &mut rng);
    let mut scores: Vec<Option<f64>> = alloc::vec![None; cfg.pop_size];
    let mut trace = Vec::with_capacity(cfg.generations);
    let mut evaluations = 0;

    for generation in 0..cfg.generations {
        let jobs: Vec<EvalJob<'_>> = population
            .iter()
            .enumerate()
            .filter(|(i, _)| scores[*i].is_none())
            .map(|(index, chromosome)| EvalJob {
                index,
                chromosome,
                stream_seed: derive_stream_seed(cfg.seed, generation as u64, index as u64),
            })
            .collect();
        let results = exec.evaluate_batch(fitness, &jobs);
        assert_eq!(results.len(), jobs.len(), "executor returned a short batch");
        evaluations += jobs.len();
        for (job, g) in jobs.iter().zip(results) {
            scores[job.index] = Some(sanitize(g));
        }
        let current: Vec<f64> = scores.iter().map(|s| s.unwrap_or(f64::INFINITY)).collect();
        let best = argmin(&current);
        trace.push(GenerationBest {
            generation,
            best_fitness: current[best],
        });

        if generation + 1 == cfg.generations {
            return Ok(GaRun {
                best_per_generation: trace,
                final_best: Individual {
                    chromosome: population.swap_remove(best),
                    fitness: Some(current[best]),
                },
                config: cfg.clone(),
                evaluations,
            });
        }

        let probs = selection_probs(&current, cfg.fitness_k)?;
        let parents = roulette_select(&probs, cfg.pop_size - 1, &mut rng);
        let mut children: Vec<Chromosome> = parents.iter().map(|&p| population[p].clone()).collect();
        for pair in children.chunks_mut(2) {
            if let [a, b] = pair {
                if rng.random::<f64>() < cfg.crossover_prob {
                    let (ca, cb) = crossover(a, b, cfg.crossover_mode, &mut rng)?;
                    *a = ca;
                    *b = cb;
                }
            }
        }
        for child in &mut children {
            if rng.random::<f64>() < cfg.mutation_prob {
                *child = mutate(child, generation + 1, cfg, &mut rng);
            }
        }

        let elite = population.swap_remove(best);
        population = core::iter::once(elite).chain(children).collect();
        scores = core::iter::once(Some(current[best]))
            .chain(core::iter::repeat_n(None, cfg.pop_size - 1))
            .collect();
    }
    unreachable!("generations >= 1 is validated")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaBpOutcome {
    pub run: GaRun,
    /// Best chromosome after the final BP training run.
    pub network: Network,
    pub loss_trace: Vec<f64>,
}

/// GA search over initial weights, then full BP training from the winner.
pub fn ga_bp<E: Executor>(
    data: &Dataset,
    shape: NetShape,
    activation: Activation,
    ga: &GaConfig,
    bp: BpConfig,
    exec: &E,
) -> Result<GaBpOutcome, EvolveError> {
    let train = data.train_set();
    let fitness = BpFitness::new(&train, shape, activation, ga);
    let run = run_ga(&fitness, shape.gene_len(), ga, exec)?;
    let start = decode(&run.final_best.chromosome, shape, activation)?;
    let (network, loss_trace) = train_bp(&start, &train, bp)?;
    Ok(GaBpOutcome {
        run,
        network,
        loss_trace,
    })
}

/// Plain BP from one uniform draw over the gene bounds (the distribution
/// the GA's initial population is drawn from).
pub fn plain_bp(
    data: &Dataset,
    shape: NetShape,
    activation: Activation,
    bounds: GeneBounds,
    bp: BpConfig,
    seed: u64,
) -> Result<(Network, Vec<f64>), NetworkError> {
    let train = data.train_set();
    let mut rng = seeded_rng(seed);
    let start = Network::random(shape, bounds, activation, &mut rng);
    train_bp(&start, &train, bp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn chrom(genes: Vec<f64>) -> Chromosome {
        Chromosome::new(genes, GeneBounds::default()).unwrap()
    }

    fn sphere(c: &Chromosome, _: u64) -> f64 {
        c.genes().iter().map(|g| g * g).sum()
    }

    #[test]
    fn population_shape_and_determinism() {
        let cfg = GaConfig { pop_size: 5, ..GaConfig::default() };
        let a = init_population(&cfg, 101, &mut seeded_rng(3));
        assert_eq!(a.len(), 5);
        assert!(a.iter().all(|c| c.len() == 101));
        assert_eq!(a, init_population(&cfg, 101, &mut seeded_rng(3)));

        let narrow = GaConfig {
            bounds: GeneBounds::new(1.0 - 1e-9, 1.0).unwrap(),
            ..cfg
        };
        let pop = init_population(&narrow, 50, &mut seeded_rng(1));
        assert!(pop.iter().flat_map(|c| c.genes()).all(|g| (1.0 - 1e-9..=1.0).contains(g)));
    }

    #[test]
    fn selection_examples() {
        assert_eq!(selection_probs(&[3.0; 4], 1.0).unwrap(), vec![0.25; 4]);
        let p = selection_probs(&[1.0, 2.0, 4.0], 1.0).unwrap();
        for (got, want) in p.iter().zip([4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(selection_probs(&[0.7], 2.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn zero_fitness_takes_all_mass() {
        assert_eq!(selection_probs(&[0.0, 2.0, 0.0, 1.0], 1.0).unwrap(), vec![0.5, 0.0, 0.5, 0.0]);
        let inf = f64::INFINITY;
        assert_eq!(selection_probs(&[inf, 1.0], 1.0).unwrap(), vec![0.0, 1.0]);
        assert_eq!(selection_probs(&[inf, inf], 1.0).unwrap(), vec![0.5, 0.5]);
        assert!(selection_probs(&[-1.0], 1.0).is_err());
        assert!(selection_probs(&[f64::NAN], 1.0).is_err());
        assert!(selection_probs(&[1.0], 0.0).is_err());
    }

    #[test]
    fn degenerate_roulette() {
        let picks = roulette_select(&[1.0, 0.0], 1000, &mut seeded_rng(0));
        assert!(picks.iter().all(|&i| i == 0));
        let picks = roulette_select(&[0.0, 1.0, 0.0], 1000, &mut seeded_rng(0));
        assert!(picks.iter().all(|&i| i == 1));
    }

    #[test]
    fn roulette_matches_even_split() {
        let picks = roulette_select(&[0.5, 0.5], 1_000_000, &mut seeded_rng(8));
        let f = picks.iter().filter(|&&i| i == 0).count() as f64 / 1e6;
        assert!((0.49..=0.51).contains(&f), "{f}");
    }

    #[test]
    fn crossover_examples() {
        let wide = GeneBounds::new(-5.0, 5.0).unwrap();
        let a = Chromosome::new(vec![2.0, -1.0], wide).unwrap();
        let b = Chromosome::new(vec![4.0, 1.0], wide).unwrap();
        let mode = CrossoverMode::Simultaneous;
        assert_eq!(crossover_at(&a, &b, 0, 0.0, mode).unwrap(), (a.clone(), b.clone()));
        let (x, y) = crossover_at(&a, &b, 0, 1.0, mode).unwrap();
        assert_eq!((x.genes(), y.genes()), (&[4.0, -1.0][..], &[2.0, 1.0][..]));
        let (x, y) = crossover_at(&a, &b, 0, 0.25, mode).unwrap();
        assert_eq!((x.genes()[0], y.genes()[0]), (2.5, 3.5));
        assert_eq!((x.genes()[1], y.genes()[1]), (-1.0, 1.0));

        // Sequential reading: second child blends with 2.5, giving 3.625.
        let (x, y) = crossover_at(&a, &b, 0, 0.25, CrossoverMode::Sequential).unwrap();
        assert_eq!((x.genes()[0], y.genes()[0]), (2.5, 3.625));

        let short = Chromosome::new(vec![0.0], wide).unwrap();
        assert_eq!(crossover_at(&a, &short, 0, 0.5, mode).unwrap_err(), EvolveError::LengthMismatch(2, 1));
    }

    #[test]
    fn mutation_examples() {
        let bounds = GeneBounds::new(-2.0, 2.0).unwrap();
        let p = MutationVariant::Paper;
        // f(g) = 0.5 from r2 = 0.5 at k = 0.
        assert_eq!(mutate_gene(1.0, 0.9, 0.5, 0, 30, bounds, p), 0.5);
        assert_eq!(mutate_gene(1.0, 0.2, 0.5, 0, 30, bounds, p), -0.5);
        assert_eq!(mutate_gene(1.0, 0.9, 0.5, 0, 30, bounds, MutationVariant::Standard), 1.5);
        assert_eq!(mutate_gene(1.0, 0.9, 1.0, 30, 30, bounds, p), 1.0);

        let cfg = GaConfig::default();
        let c = Chromosome::random(20, cfg.bounds, &mut seeded_rng(2));
        let mut rng = seeded_rng(4);
        for _ in 0..100 {
            assert_eq!(mutate(&c, cfg.generations, &cfg, &mut rng), c);
        }
    }

    #[test]
    fn mutation_anneals() {
        let bounds = GeneBounds::default();
        for variant in [MutationVariant::Paper, MutationVariant::Standard] {
            for r in [0.9, 0.1] {
                let mut last = f64::INFINITY;
                for k in 0..30 {
                    let change = (mutate_gene(0.4, r, 1.0, k, 30, bounds, variant) - 0.4).abs();
                    assert!(change < last, "{variant} r={r} k={k}");
                    last = change;
                }
            }
        }
    }

    #[test]
    fn loop_accounting() {
        let cfg = GaConfig { pop_size: 2, generations: 1, ..GaConfig::default() };
        let run = run_ga(&sphere, 5, &cfg, &Serial).unwrap();
        assert_eq!(run.evaluations, 2);
        assert_eq!(run.best_per_generation.len(), 1);

        let cfg = GaConfig { pop_size: 6, generations: 4, ..GaConfig::default() };
        let run = run_ga(&sphere, 5, &cfg, &Serial).unwrap();
        assert_eq!(run.evaluations, 6 + 3 * 5);
    }

    // Factors frozen from a pilot over seeds 0..10 at four genes: the
    // standard variant never fell below 16x, the paper variant's median
    // was ~170x with a worst case of 3.5x.
    #[test]
    fn sphere_improves_tenfold() {
        let ratio = |variant, seed| {
            let cfg = GaConfig { seed, mutation_variant: variant, ..GaConfig::default() };
            let run = run_ga(&sphere, 4, &cfg, &Serial).unwrap();
            run.best_per_generation[0].best_fitness / run.best_per_generation[29].best_fitness
        };
        for seed in 0..10 {
            assert!(ratio(MutationVariant::Standard, seed) >= 10.0, "seed {seed}");
        }
        let mut paper: Vec<f64> = (0..10).map(|s| ratio(MutationVariant::Paper, s)).collect();
        paper.sort_by(f64::total_cmp);
        assert!(paper[5] >= 10.0, "{paper:?}");

        let cfg = GaConfig { seed: 12, ..GaConfig::default() };
        assert_eq!(run_ga(&sphere, 4, &cfg, &Serial).unwrap(), run_ga(&sphere, 4, &cfg, &Serial).unwrap());
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            GaConfig { pop_size: 1, ..GaConfig::default() },
            GaConfig { generations: 0, ..GaConfig::default() },
            GaConfig { crossover_prob: 1.5, ..GaConfig::default() },
            GaConfig { fitness_k: 0.0, ..GaConfig::default() },
        ];
        for cfg in bad {
            assert!(run_ga(&sphere, 3, &cfg, &Serial).is_err());
        }
    }

    #[test]
    fn bp_fitness_without_training_is_raw_error() {
        let shape = NetShape::new(1, 1, 1).unwrap();
        let samples = SampleSet::new(vec![0.0, 1.0], vec![0.5, 0.5], 1, 1).unwrap();
        let cfg = GaConfig { fitness_bp_epochs: 0, ..GaConfig::default() };
        let f = BpFitness::new(&samples, shape, Activation::Tanh, &cfg);
        assert_eq!(f.evaluate(&chrom(vec![0.0, 0.0, 0.0, 0.5]), 0), 0.0);
        assert_eq!(f.evaluate(&chrom(vec![0.0, 0.0, 0.0, 0.0]), 0), 1.0);
        let trained = GaConfig { fitness_bp_epochs: 10, ..GaConfig::default() };
        let f = BpFitness::new(&samples, shape, Activation::Tanh, &trained);
        let c = chrom(vec![0.3, -0.2, 0.1, 0.0]);
        assert_eq!(f.evaluate(&c, 1), f.evaluate(&c, 2));
    }

    proptest! {
        #[test]
        fn selection_normalizes_and_ignores_k(
            g in proptest::collection::vec(1e-6f64..1e6, 1..50),
            k1 in 1e-3f64..1e3,
            k2 in 1e-3f64..1e3,
        ) {
            let a = selection_probs(&g, k1).unwrap();
            let b = selection_probs(&g, k2).unwrap();
            prop_assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn operators_stay_in_bounds(seed in any::<u64>(), generation in 0usize..=30, standard in any::<bool>()) {
            let cfg = GaConfig {
                mutation_variant: if standard { MutationVariant::Standard } else { MutationVariant::Paper },
                ..GaConfig::default()
            };
            let mut rng = seeded_rng(seed);
            let a = Chromosome::random(7, cfg.bounds, &mut rng);
            let b = Chromosome::random(7, cfg.bounds, &mut rng);
            let (x, y) = crossover(&a, &b, CrossoverMode::Sequential, &mut rng).unwrap();
            for (i, (cx, cy)) in x.genes().iter().zip(y.genes()).enumerate() {
                let lo = a.genes()[i].min(b.genes()[i]);
                let hi = a.genes()[i].max(b.genes()[i]);
                prop_assert!(lo <= *cx && *cx <= hi && lo <= *cy && *cy <= hi);
            }
            let m = mutate(&x, generation, &cfg, &mut rng);
            prop_assert!(m.genes().iter().all(|g| cfg.bounds.contains(*g)));
            prop_assert!(m.genes().iter().zip(x.genes()).filter(|(p, q)| p != q).count() <= 1);
        }
    }
}
