use std::cell::RefCell;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use super::bracket::BracketKey;
use super::frame::Frame;
use super::gf::ExtField;
use super::poly::Polynomial;
use super::VarIndex;
use crate::linalg;

/// A deterministic random point: every variable `a[i,j]` gets a value in
/// `GF(p^w)` derived from `(seed, i, j)`; variables fixed by a frame keep
/// their constant.
pub struct Evaluator<'a> {
    field: &'a ExtField,
    seed: u64,
    frame: Option<&'a Frame>,
    vals: RefCell<FxHashMap<VarIndex, u64>>,
    brackets: RefCell<FxHashMap<BracketKey, u64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(field: &'a ExtField, seed: u64) -> Self {
        Evaluator {
            field,
            seed,
            frame: None,
            vals: RefCell::new(FxHashMap::default()),
            brackets: RefCell::new(FxHashMap::default()),
        }
    }

    pub fn on_frame(field: &'a ExtField, seed: u64, frame: &'a Frame) -> Self {
        let mut e = Self::new(field, seed);
        if !frame.is_generic() {
            e.frame = Some(frame);
        }
        e
    }

    pub fn field(&self) -> &ExtField {
        self.field
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn var(&self, v: VarIndex) -> u64 {
        if let Some(c) = self.frame.and_then(|f| f.fixed_value(v)) {
            return self.field.from_prime(c);
        }
        *self.vals.borrow_mut().entry(v).or_insert_with(|| {
            let mix = self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((v.row as u64) << 40 | (v.col as u64) << 20);
            let mut rng = ChaCha8Rng::seed_from_u64(mix);
            self.field.from_bits(rng.next_u64())
        })
    }

    pub fn poly(&self, f: &Polynomial) -> u64 {
        f.eval(self.field, |v| self.var(v))
    }

    /// Value of the bracket with the given sorted columns.
    pub fn bracket(&self, key: &BracketKey) -> u64 {
        if let Some(&b) = self.brackets.borrow().get(key) {
            return b;
        }
        let n = key.len();
        let m: Vec<Vec<u64>> = (1..=n)
            .map(|i| key.iter().map(|&j| self.var(VarIndex::new(i, j as usize))).collect())
            .collect();
        let d = linalg::det(self.field, &m);
        self.brackets.borrow_mut().insert(key.clone(), d);
        d
    }
}
