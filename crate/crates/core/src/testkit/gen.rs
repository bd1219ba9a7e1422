use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::term::{Action, Name, SyncSet, Term};

/// Relative constructor frequencies. A zero weight disables a constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    pub nil: u32,
    pub bot: u32,
    pub prefix: u32,
    pub tau_prefix: u32,
    pub ext: u32,
    pub conj: u32,
    pub disj: u32,
    pub par: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { nil: 3, bot: 1, prefix: 6, tau_prefix: 1, ext: 3, conj: 2, disj: 2, par: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub max_degree: usize,
    pub alphabet: Vec<Name>,
    pub weights: Weights,
    /// No bottom and no conjunction anywhere.
    pub basic_only: bool,
    /// The generated term itself is stable.
    pub stable_only: bool,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_degree: 12,
            alphabet: ["a", "b", "c"].into_iter().map(Name::new).collect(),
            weights: Weights::default(),
            basic_only: false,
            stable_only: false,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_degree(mut self, d: usize) -> Self {
        self.max_degree = d;
        self
    }

    pub fn basic(mut self) -> Self {
        self.basic_only = true;
        self
    }

    pub fn stable(mut self) -> Self {
        self.stable_only = true;
        self
    }
}

#[derive(Clone, Copy)]
enum Pick {
    Prefix,
    TauPrefix,
    Ext,
    Conj,
    Disj,
    Par,
}

/// Deterministic stream of random terms.
pub struct TermGen {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl TermGen {
    pub fn new(cfg: GenConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        TermGen { cfg, rng }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    /// A term whose degree is drawn uniformly from `1..=max_degree`.
    pub fn term(&mut self) -> Term {
        let d = self.rng.gen_range(1..=self.cfg.max_degree.max(1));
        self.term_of_degree(d)
    }

    pub fn term_of_degree(&mut self, d: usize) -> Term {
        let stable = self.cfg.stable_only;
        self.gen(d.max(1), stable)
    }

    /// A term with at most the given degree, respecting the other settings.
    pub fn term_up_to(&mut self, d: usize) -> Term {
        let d = self.rng.gen_range(1..=d.max(1));
        self.term_of_degree(d)
    }

    pub fn action(&mut self) -> Name {
        self.cfg.alphabet.choose(&mut self.rng).cloned().unwrap_or_else(|| Name::new("a"))
    }

    pub fn sync_set(&mut self) -> SyncSet {
        let names = self.cfg.alphabet.clone();
        names.into_iter().filter(|_| self.rng.gen_bool(0.5)).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn gen(&mut self, d: usize, stable: bool) -> Term {
        let w = self.cfg.weights.clone();
        let basic = self.cfg.basic_only;
        if d == 1 {
            let bot = if basic { 0 } else { w.bot };
            let total = w.nil + bot;
            if total == 0 || self.rng.gen_range(0..total) < w.nil {
                return Term::Nil;
            }
            return Term::Bot;
        }
        let mut options: Vec<(Pick, u32)> = vec![(Pick::Prefix, w.prefix)];
        if !stable {
            options.push((Pick::TauPrefix, w.tau_prefix));
        }
        if d >= 3 {
            options.push((Pick::Ext, w.ext));
            options.push((Pick::Par, w.par));
            if !basic {
                options.push((Pick::Conj, w.conj));
            }
            if !stable {
                options.push((Pick::Disj, w.disj));
            }
        }
        options.retain(|(_, w)| *w > 0);
        if options.is_empty() {
            options.push((Pick::Prefix, 1));
        }
        let total: u32 = options.iter().map(|(_, w)| w).sum();
        let mut roll = self.rng.gen_range(0..total);
        let mut pick = options[0].0;
        for (p, w) in &options {
            if roll < *w {
                pick = *p;
                break;
            }
            roll -= w;
        }
        match pick {
            Pick::Prefix => {
                let a = self.action();
                Term::prefix(Action::Visible(a), self.gen(d - 1, false))
            }
            Pick::TauPrefix => Term::tau(self.gen(d - 1, false)),
            _ => {
                let l = self.rng.gen_range(1..=d - 2);
                let r = d - 1 - l;
                let (lt, rt) = match pick {
                    Pick::Disj => (self.gen(l, false), self.gen(r, false)),
                    _ => (self.gen(l, stable), self.gen(r, stable)),
                };
                match pick {
                    Pick::Ext => Term::ext(lt, rt),
                    Pick::Conj => Term::conj(lt, rt),
                    Pick::Disj => Term::disj(lt, rt),
                    _ => {
                        let a = self.sync_set();
                        Term::par(lt, rt, a)
                    }
                }
            }
        }
    }
}

/// One term from a configuration; the same configuration always yields
/// the same term.
pub fn gen_term(cfg: &GenConfig) -> Term {
    TermGen::new(cfg.clone()).term()
}
