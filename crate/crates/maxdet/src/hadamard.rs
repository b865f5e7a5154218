//! Hadamard matrices, bit-packed sign matrices, and the order registry.
//!
//! A [`SignMatrix`] stores one bit per ±1 entry (bit 1 ↔ +1), row-major, so
//! the inner product of two length-L sign rows is `L − 2·popcount(x XOR y)`
//! — one XOR and one popcount per 64 entries. That is what keeps Monte Carlo
//! sampling cheap at orders in the thousands.
//!
//! Constructions: Sylvester doubling for orders 2^k, Paley quadratic-residue
//! cores for orders q+1 (q ≡ 3 mod 4 prime) and 2(q+1) (q ≡ 1 mod 4 prime),
//! and Kronecker products of verified matrices. The [`OrderRegistry`] tracks
//! which orders are available, either as a closure of certified
//! constructions or as a known-orders table, and resolves an arbitrary n
//! into the pair (h, d) with h the largest registered order ≤ n and
//! d = n − h the gap.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::RngCore;

use crate::error::{Error, Result};

/// Largest matrix order the constructions agree to build by default.
pub const DEFAULT_SIZE_LIMIT: u64 = 4096;

/// A dense {−1, +1} matrix with bit-packed rows (bit 1 ↔ +1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl SignMatrix {
    /// All-(+1) matrix of the given shape.
    pub fn plus_ones(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must have positive shape");
        let wpr = cols.div_ceil(64);
        let mut m = SignMatrix {
            rows,
            cols,
            words_per_row: wpr,
            data: vec![0; rows * wpr],
        };
        let full = cols / 64;
        let rem = cols % 64;
        for i in 0..rows {
            for w in 0..full {
                m.data[i * wpr + w] = u64::MAX;
            }
            if rem > 0 {
                m.data[i * wpr + full] = (1u64 << rem) - 1;
            }
        }
        m
    }

    /// Build from an entry function returning +1 or −1.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i32) -> Self {
        let mut m = Self::plus_ones(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Uniform random ±1 matrix; consumes whole words row by row, so a given
    /// generator state fully determines the result.
    pub fn random(rows: usize, cols: usize, rng: &mut impl RngCore) -> Self {
        assert!(rows >= 1 && cols >= 1);
        let wpr = cols.div_ceil(64);
        let mut data = vec![0u64; rows * wpr];
        let full = cols / 64;
        let rem = cols % 64;
        for i in 0..rows {
            for w in 0..full {
                data[i * wpr + w] = rng.next_u64();
            }
            if rem > 0 {
                data[i * wpr + full] = rng.next_u64() & ((1u64 << rem) - 1);
            }
        }
        SignMatrix {
            rows,
            cols,
            words_per_row: wpr,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Order of a square matrix.
    pub fn order(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        let w = self.data[i * self.words_per_row + j / 64];
        if (w >> (j % 64)) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i32) {
        debug_assert!(v == 1 || v == -1, "entries must be ±1");
        let idx = i * self.words_per_row + j / 64;
        let bit = 1u64 << (j % 64);
        if v == 1 {
            self.data[idx] |= bit;
        } else {
            self.data[idx] &= !bit;
        }
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Inner product of row `i` of `self` with row `j` of `other`.
    /// Both matrices must have the same number of columns. Unused tail bits
    /// are kept zero, so they cancel in the XOR.
    #[inline]
    pub fn dot_rows(&self, i: usize, other: &SignMatrix, j: usize) -> i64 {
        debug_assert_eq!(self.cols, other.cols);
        let a = self.row_words(i);
        let b = other.row_words(j);
        let mut diff = 0u32;
        for (x, y) in a.iter().zip(b) {
            diff += (x ^ y).count_ones();
        }
        self.cols as i64 - 2 * diff as i64
    }

    pub fn transpose(&self) -> SignMatrix {
        SignMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Exact orthogonality check M·Mᵀ = order·I. False for non-square input.
    pub fn is_hadamard(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let n = self.rows as i64;
        for i in 0..self.rows {
            for j in (i + 1)..self.rows {
                if self.dot_rows(i, self, j) != 0 {
                    return false;
                }
            }
        }
        // Diagonal entries are structurally n; keep the assertion honest.
        debug_assert!(self.dot_rows(0, self, 0) == n);
        true
    }

    /// Serialize in the text exchange format: a `rows cols` header line, then
    /// one '+'/'-' character per entry, one row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.cols + 1) * (self.rows + 1));
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(if self.get(i, j) == 1 { '+' } else { '-' });
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text exchange format.
    pub fn from_text(s: &str) -> Result<SignMatrix> {
        let mut lines = s.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let mut parts = header.split_whitespace();
        let rows: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
        let cols: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad matrix header".into()))?;
        if rows == 0 || cols == 0 {
            return Err(Error::Parse("matrix shape must be positive".into()));
        }
        let mut m = SignMatrix::plus_ones(rows, cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {i}")))?
                .trim_end();
            if line.chars().count() != cols {
                return Err(Error::Parse(format!("row {i} has wrong length")));
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '+' => m.set(i, j, 1),
                    '-' => m.set(i, j, -1),
                    other => return Err(Error::Parse(format!("bad entry '{other}' at ({i},{j})"))),
                }
            }
        }
        Ok(m)
    }
}

/// Deterministic prime test for the moduli used by the Paley constructions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol χ(a) mod an odd prime q: +1 for nonzero squares,
/// −1 for non-squares, 0 for a ≡ 0.
fn legendre(a: i64, q: u64) -> i32 {
    let a = a.rem_euclid(q as i64) as u64;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Sylvester (doubling) Hadamard matrix of order 2^k.
pub fn sylvester(k: u32) -> Result<SignMatrix> {
    let order: u64 = 1u64.checked_shl(k).ok_or(Error::SizeLimit {
        requested: u64::MAX,
        limit: DEFAULT_SIZE_LIMIT,
    })?;
    if order > DEFAULT_SIZE_LIMIT {
        return Err(Error::SizeLimit {
            requested: order,
            limit: DEFAULT_SIZE_LIMIT,
        });
    }
    let n = order as usize;
    let mut m = SignMatrix::plus_ones(n, n);
    let mut size = 1;
    while size < n {
        for i in 0..size {
            for j in 0..size {
                let v = m.get(i, j);
                m.set(i, j + size, v);
                m.set(i + size, j, v);
                m.set(i + size, j + size, -v);
            }
        }
        size *= 2;
    }
    Ok(m)
}

/// Paley construction I: order q + 1 for a prime q ≡ 3 (mod 4).
///
/// The core is the quadratic-residue circulant bordered by a skew ± frame;
/// adding the identity to the skew conference matrix gives a Hadamard matrix.
pub fn paley_i(q: u64) -> Result<SignMatrix> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 4 != 3 {
        return Err(Error::WrongResidue { q, want: 3 });
    }
    if q + 1 > DEFAULT_SIZE_LIMIT {
        return Err(Error::SizeLimit {
            requested: q + 1,
            limit: DEFAULT_SIZE_LIMIT,
        });
    }
    let n = (q + 1) as usize;
    Ok(SignMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            1
        } else if j == 0 {
            -1
        } else if i == j {
            1
        } else {
            legendre(i as i64 - j as i64, q)
        }
    }))
}

/// Paley construction II: order 2(q + 1) for a prime q ≡ 1 (mod 4).
///
/// Each entry c of the symmetric conference matrix of order q + 1 expands to
/// a 2×2 block: `[[1,−1],[−1,−1]]` for c = 0 and `±[[1,1],[1,−1]]` for c = ±1.
pub fn paley_ii(q: u64) -> Result<SignMatrix> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 4 != 1 {
        return Err(Error::WrongResidue { q, want: 1 });
    }
    let order = 2 * (q + 1);
    if order > DEFAULT_SIZE_LIMIT {
        return Err(Error::SizeLimit {
            requested: order,
            limit: DEFAULT_SIZE_LIMIT,
        });
    }
    let m = (q + 1) as usize;
    let conference = |i: usize, j: usize| -> i32 {
        if i == j {
            0
        } else if i == 0 || j == 0 {
            1
        } else {
            legendre(i as i64 - j as i64, q)
        }
    };
    Ok(SignMatrix::from_fn(2 * m, 2 * m, |r, c| {
        let (bi, ri) = (r / 2, r % 2);
        let (bj, rj) = (c / 2, c % 2);
        match conference(bi, bj) {
            0 => {
                // [[1,-1],[-1,-1]]
                if ri == 0 && rj == 0 {
                    1
                } else {
                    -1
                }
            }
            s => {
                // s·[[1,1],[1,-1]]
                let base = if ri == 1 && rj == 1 { -1 } else { 1 };
                s * base
            }
        }
    }))
}

/// Kronecker product of two verified Hadamard matrices.
pub fn kronecker(h1: &SignMatrix, h2: &SignMatrix) -> Result<SignMatrix> {
    if !h1.is_hadamard() {
        return Err(Error::NotHadamard(h1.rows()));
    }
    if !h2.is_hadamard() {
        return Err(Error::NotHadamard(h2.rows()));
    }
    let (n1, n2) = (h1.order(), h2.order());
    Ok(SignMatrix::from_fn(n1 * n2, n1 * n2, |i, j| {
        h1.get(i / n2, j / n2) * h2.get(i % n2, j % n2)
    }))
}

/// How a registered order can be materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Sylvester(u32),
    PaleyI(u64),
    PaleyII(u64),
    Kronecker(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    pub fn order(&self) -> u64 {
        match self {
            Recipe::Sylvester(k) => 1u64 << k,
            Recipe::PaleyI(q) => q + 1,
            Recipe::PaleyII(q) => 2 * (q + 1),
            Recipe::Kronecker(a, b) => a.order() * b.order(),
        }
    }

    pub fn build(&self) -> Result<SignMatrix> {
        match self {
            Recipe::Sylvester(k) => sylvester(*k),
            Recipe::PaleyI(q) => paley_i(*q),
            Recipe::PaleyII(q) => paley_ii(*q),
            Recipe::Kronecker(a, b) => kronecker(&a.build()?, &b.build()?),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Recipe::Sylvester(k) => format!("sylvester({k})"),
            Recipe::PaleyI(q) => format!("paley-i({q})"),
            Recipe::PaleyII(q) => format!("paley-ii({q})"),
            Recipe::Kronecker(a, b) => {
                format!("kronecker({}, {})", a.describe(), b.describe())
            }
        }
    }
}

/// Evidence that an order is a Hadamard order: the recipe that builds it and
/// whether the built matrix passed the exact orthogonality check.
#[derive(Debug, Clone)]
pub struct HadamardCert {
    pub order: u64,
    pub recipe: Recipe,
    pub verified: bool,
}

/// Where a registry's orders come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegistryMode {
    /// Orders carry construction recipes and can be materialized.
    Constructible,
    /// Orders are taken on faith from a table (or a file).
    KnownTable,
}

/// The set of usable Hadamard orders, with gap resolution.
#[derive(Debug, Clone)]
pub struct OrderRegistry {
    mode: RegistryMode,
    recipes: BTreeMap<u64, Option<Recipe>>,
}

impl OrderRegistry {
    /// Table registry: 1, 2, every multiple of 4 up to 664 (all of which are
    /// known Hadamard orders), plus the isolated larger orders the comparison
    /// tables lean on: 672 (the minors neighbor of 668), and 996 and 1000
    /// (so n = 998 resolves to a gap of 2 and has its upper neighbor).
    pub fn known_table() -> Self {
        let mut recipes: BTreeMap<u64, Option<Recipe>> = BTreeMap::new();
        recipes.insert(1, None);
        recipes.insert(2, None);
        for k in 1..=166u64 {
            recipes.insert(4 * k, None);
        }
        for extra in [672, 996, 1000] {
            recipes.insert(extra, None);
        }
        OrderRegistry {
            mode: RegistryMode::KnownTable,
            recipes,
        }
    }

    /// Smallest registered order ≥ n.
    pub fn next_order_at_least(&self, n: u64) -> Option<u64> {
        self.recipes.range(n..).next().map(|(&o, _)| o)
    }

    /// Constructible registry: the closure of the Sylvester and Paley orders
    /// under Kronecker products, up to `limit`. Every order carries a recipe.
    pub fn constructible(limit: u64) -> Self {
        let mut recipes: BTreeMap<u64, Option<Recipe>> = BTreeMap::new();
        let mut insert = |r: Recipe| {
            let o = r.order();
            recipes.entry(o).or_insert(Some(r));
        };
        let mut k = 0u32;
        while 1u64 << k <= limit {
            insert(Recipe::Sylvester(k));
            k += 1;
        }
        for q in (3..limit).step_by(2) {
            if is_prime(q) {
                if q % 4 == 3 && q + 1 <= limit {
                    insert(Recipe::PaleyI(q));
                }
                if q % 4 == 1 && 2 * (q + 1) <= limit {
                    insert(Recipe::PaleyII(q));
                }
            }
        }
        // Kronecker closure to a fixpoint.
        loop {
            let orders: Vec<u64> = recipes.keys().copied().collect();
            let mut added = false;
            for &a in &orders {
                for &b in &orders {
                    let prod = match a.checked_mul(b) {
                        Some(p) if p <= limit => p,
                        _ => continue,
                    };
                    if !recipes.contains_key(&prod) {
                        let ra = recipes[&a].clone().unwrap();
                        let rb = recipes[&b].clone().unwrap();
                        recipes.insert(prod, Some(Recipe::Kronecker(Box::new(ra), Box::new(rb))));
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        OrderRegistry {
            mode: RegistryMode::Constructible,
            recipes,
        }
    }

    /// Registry from an explicit list of orders (known-table mode).
    pub fn from_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        let recipes = orders
            .into_iter()
            .filter(|&o| o >= 1)
            .map(|o| (o, None))
            .collect();
        OrderRegistry {
            mode: RegistryMode::KnownTable,
            recipes,
        }
    }

    /// Parse a registry file: one order per line, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut orders = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let o: u64 = line
                .parse()
                .map_err(|_| Error::Parse(format!("registry line {}: '{line}'", lineno + 1)))?;
            orders.push(o);
        }
        if orders.is_empty() {
            return Err(Error::Parse("registry file lists no orders".into()));
        }
        Ok(Self::from_orders(orders))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# Hadamard orders, one per line\n");
        for o in self.recipes.keys() {
            let _ = writeln!(out, "{o}");
        }
        out
    }

    pub fn mode(&self) -> RegistryMode {
        self.mode
    }

    pub fn contains(&self, order: u64) -> bool {
        self.recipes.contains_key(&order)
    }

    pub fn orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.recipes.keys().copied()
    }

    /// Largest registered order ≤ n and the gap d = n − h.
    pub fn resolve_gap(&self, n: u64) -> Result<(u64, u64)> {
        let h = self
            .recipes
            .range(..=n)
            .next_back()
            .map(|(&o, _)| o)
            .ok_or(Error::EmptyRegistryBelow(n))?;
        Ok((h, n - h))
    }

    /// Certificate for an order (constructible mode only).
    pub fn cert(&self, order: u64) -> Result<HadamardCert> {
        match self.recipes.get(&order) {
            Some(Some(recipe)) => {
                let m = recipe.build()?;
                let verified = m.is_hadamard();
                Ok(HadamardCert {
                    order,
                    recipe: recipe.clone(),
                    verified,
                })
            }
            Some(None) => Err(Error::ParamRange(format!(
                "order {order} is registered without a construction recipe"
            ))),
            None => Err(Error::ParamRange(format!(
                "order {order} is not registered"
            ))),
        }
    }

    /// Materialize a matrix of the given order.
    ///
    /// In known-table mode this falls back to the constructible recipes, so
    /// orders that the table merely asserts (like 996) are refused.
    pub fn construct(&self, order: u64) -> Result<SignMatrix> {
        if let Some(Some(recipe)) = self.recipes.get(&order) {
            return recipe.build();
        }
        let fallback = OrderRegistry::constructible(order.max(4));
        match fallback.recipes.get(&order) {
            Some(Some(recipe)) => recipe.build(),
            _ => Err(Error::ParamRange(format!(
                "no construction known for order {order}"
            ))),
        }
    }
}
