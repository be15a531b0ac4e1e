//! Seeded random generation of formulae and structures for testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::structure::{Heap, SlStructure};
use crate::syntax::{FoFormula, Quantifier, SlFormula, Term, Var};

/// Size limits for generated sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Upper bound on `n + m` for a ∃ⁿ∀ᵐ prefix.
    pub max_quantifiers: usize,
    /// Upper bound on the number of matrix nodes.
    pub max_nodes: usize,
    /// Upper bound on the constants of cardinality atoms.
    pub max_const: u32,
    /// Whether `emp`, points-to, `*` and `-*` may occur.
    pub spatial: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_quantifiers: 3,
            max_nodes: 12,
            max_const: 2,
            spatial: true,
        }
    }
}

/// A deterministic generator: the same seed gives the same sequence.
pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A closed ∃*∀* sentence within the configured limits.
    pub fn bsr_sentence(&mut self, cfg: &GenConfig) -> SlFormula {
        let n = self.rng.gen_range(0..=cfg.max_quantifiers);
        let m = self.rng.gen_range(0..=cfg.max_quantifiers - n);
        let mut prefix = Vec::new();
        prefix.extend((1..=n).map(|i| (Quantifier::Exists, Var::new(format!("x{i}")))));
        prefix.extend((1..=m).map(|i| (Quantifier::Forall, Var::new(format!("y{i}")))));
        let vars: Vec<Var> = prefix.iter().map(|(_, v)| v.clone()).collect();
        let nodes = self.rng.gen_range(1..=cfg.max_nodes.max(1));
        let matrix = self.sl_formula(&vars, nodes, cfg.max_const, cfg.spatial);
        SlFormula::quantify(&prefix, matrix)
    }

    /// A quantifier-free boolean combination of test formulae over `vars`
    /// with about `nodes` nodes.
    pub fn test_combination(
        &mut self,
        vars: &[Var],
        nodes: usize,
        max_const: u32,
        domain_independent: bool,
    ) -> SlFormula {
        if nodes <= 1 {
            return self.test_atom(vars, max_const, domain_independent);
        }
        if nodes == 2 || self.rng.gen_ratio(1, 4) {
            return SlFormula::not(self.test_combination(vars, nodes - 1, max_const, domain_independent));
        }
        let left = self.rng.gen_range(1..nodes - 1);
        let a = self.test_combination(vars, left, max_const, domain_independent);
        let b = self.test_combination(vars, nodes - 1 - left, max_const, domain_independent);
        match self.rng.gen_range(0..4) {
            0 => SlFormula::and(a, b),
            1 => SlFormula::or(a, b),
            2 => SlFormula::imp(a, b),
            _ => SlFormula::iff(a, b),
        }
    }

    /// A quantifier-free SL formula over `vars` with exactly `nodes` nodes.
    pub fn sl_formula(&mut self, vars: &[Var], nodes: usize, max_const: u32, spatial: bool) -> SlFormula {
        if nodes <= 1 {
            return if spatial && self.rng.gen_ratio(1, 3) {
                self.spatial_atom(vars)
            } else {
                self.test_atom(vars, max_const, false)
            };
        }
        if nodes == 2 || self.rng.gen_ratio(1, 4) {
            return SlFormula::not(self.sl_formula(vars, nodes - 1, max_const, spatial));
        }
        let left = self.rng.gen_range(1..nodes - 1);
        let a = self.sl_formula(vars, left, max_const, spatial);
        let b = self.sl_formula(vars, nodes - 1 - left, max_const, spatial);
        let ops = if spatial { 7 } else { 4 };
        match self.rng.gen_range(0..ops) {
            0 => SlFormula::and(a, b),
            1 => SlFormula::or(a, b),
            2 => SlFormula::imp(a, b),
            3 => SlFormula::iff(a, b),
            4 | 5 => SlFormula::star(a, b),
            _ => SlFormula::wand(a, b),
        }
    }

    fn var(&mut self, vars: &[Var]) -> Var {
        vars.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn spatial_atom(&mut self, vars: &[Var]) -> SlFormula {
        if vars.is_empty() || self.rng.gen_bool(0.5) {
            SlFormula::Emp
        } else {
            SlFormula::PointsTo(self.var(vars), self.var(vars))
        }
    }

    pub fn test_atom(&mut self, vars: &[Var], max_const: u32, domain_independent: bool) -> SlFormula {
        let c = self.rng.gen_range(0..=max_const);
        let pick = match (vars.is_empty(), domain_independent) {
            (true, true) => 0,
            (true, false) => [0, 4, 5][self.rng.gen_range(0..3)],
            (false, true) => [0, 1, 2, 3, 6, 7, 8][self.rng.gen_range(0..7)],
            (false, false) => self.rng.gen_range(0..9),
        };
        match pick {
            0 => SlFormula::HeapGe(c),
            1 | 6 => SlFormula::Hooks(self.var(vars), self.var(vars)),
            2 | 7 => SlFormula::Alloc(self.var(vars)),
            3 | 8 => SlFormula::Eq(self.var(vars), self.var(vars)),
            4 => SlFormula::UnivGe(c),
            _ => SlFormula::HeapGeUnivMinus(c),
        }
    }

    /// A structure over `{0, ..., u-1}` with every variable of `vars` bound.
    pub fn structure(&mut self, u: usize, vars: &[Var]) -> SlStructure {
        let density = self.rng.gen_range(0.0..=1.0);
        let mut heap = Heap::new();
        for l in 0..u {
            if self.rng.gen_bool(density) {
                heap.insert(l, self.rng.gen_range(0..u));
            }
        }
        let store: Vec<(Var, usize)> = vars
            .iter()
            .map(|v| (v.clone(), self.rng.gen_range(0..u)))
            .collect();
        SlStructure::with_size(u, store, heap).expect("locations drawn from the universe")
    }

    /// A closed flat FO sentence without predicate symbols.
    pub fn fo_sentence(&mut self, max_quantifiers: usize, nodes: usize) -> FoFormula {
        let q = self.rng.gen_range(1..=max_quantifiers.max(1));
        let vars: Vec<Var> = (1..=q).map(|i| Var::new(format!("v{i}"))).collect();
        let mut phi = self.fo_matrix(&vars, nodes);
        for v in vars.iter().rev() {
            phi = if self.rng.gen_bool(0.5) {
                FoFormula::exists(v.clone(), phi)
            } else {
                FoFormula::forall(v.clone(), phi)
            };
        }
        phi
    }

    fn fo_matrix(&mut self, vars: &[Var], nodes: usize) -> FoFormula {
        if nodes <= 1 {
            let a = Term::var(self.var(vars));
            let b = Term::var(self.var(vars));
            return if self.rng.gen_bool(0.6) {
                FoFormula::eq(Term::app(a), b)
            } else {
                FoFormula::eq(a, b)
            };
        }
        if nodes == 2 || self.rng.gen_ratio(1, 4) {
            return FoFormula::not(self.fo_matrix(vars, nodes - 1));
        }
        let left = self.rng.gen_range(1..nodes - 1);
        let a = self.fo_matrix(vars, left);
        let b = self.fo_matrix(vars, nodes - 1 - left);
        match self.rng.gen_range(0..4) {
            0 => FoFormula::and(a, b),
            1 => FoFormula::or(a, b),
            2 => FoFormula::imp(a, b),
            _ => FoFormula::iff(a, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{is_flat, PrenexView};
    use crate::testform::is_test_combination;

    #[test]
    fn same_seed_same_sentences() {
        let cfg = GenConfig::default();
        let a: Vec<String> = {
            let mut g = Generator::new(3);
            (0..20).map(|_| g.bsr_sentence(&cfg).to_string()).collect()
        };
        let mut g = Generator::new(3);
        let b: Vec<String> = (0..20).map(|_| g.bsr_sentence(&cfg).to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn shapes() {
        let mut g = Generator::new(11);
        let cfg = GenConfig::default();
        for _ in 0..200 {
            let phi = g.bsr_sentence(&cfg);
            assert!(phi.is_closed());
            let (n, m) = phi.classify_prefix().bsr().unwrap();
            assert!(n + m <= 3);
            let (_, matrix) = phi.split_prefix();
            assert!(matrix.subformulas().len() <= cfg.max_nodes);
        }
        let vars = [Var::new("a"), Var::new("b")];
        for _ in 0..200 {
            let t = g.test_combination(&vars, 6, 2, true);
            assert!(is_test_combination(&t, true), "{t}");
            let f = g.fo_sentence(3, 5);
            assert!(is_flat(&f) && f.free_vars().is_empty());
        }
    }
}
