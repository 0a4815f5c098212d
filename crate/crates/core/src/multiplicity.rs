//! Counting the graph families that make up each order-parameter stratum.
//!
//! * sparse matchings: `E` disjoint edges on `n_s` labeled vertices;
//! * sparse/interface placements: `E` edges each touching at least one of
//!   `n_s` sparse vertices, every sparse vertex of degree at most one, cut
//!   edges free to land on any of `n_d` dense vertices;
//! * dense graphs: labeled graphs on `n_d` vertices with `E` edges and minimum
//!   degree two.
//!
//! The first two are sums of positive terms and are evaluated directly on the
//! log scale. The dense count comes from inclusion–exclusion over the set of
//! vertices allowed degree <= 1; that alternating sum cancels across hundreds
//! of decimal digits whenever `E` is small relative to `binom(n_d, 2)`, so it
//! is carried out in exact integer arithmetic and converted to log scale only
//! at the end.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use statrs::function::factorial::{ln_binomial, ln_factorial};

use crate::error::{Error, Result};
use crate::lognum::{LogAccumulator, LogNumber};

#[inline]
pub fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Number of matchings of size `e` on `n_s` labeled vertices,
/// `n_s! / (e! 2^e (n_s - 2e)!)`.
pub fn sparse_matchings(e: usize, n_s: usize) -> LogNumber {
    if 2 * e > n_s {
        return LogNumber::ZERO;
    }
    LogNumber::from_ln(
        ln_factorial(n_s as u64)
            - ln_factorial(e as u64)
            - e as f64 * std::f64::consts::LN_2
            - ln_factorial((n_s - 2 * e) as u64),
    )
}

/// Largest edge count placeable with every sparse vertex of degree <= 1 and
/// every edge touching the sparse set. A single dense vertex can absorb any
/// number of cut edges, so with `n_d >= 1` every sparse vertex can take one.
pub fn max_interface_edges(n_s: usize, n_d: usize) -> usize {
    if n_d == 0 {
        n_s / 2
    } else {
        n_s
    }
}

/// Placements of `e` edges in the sparse set or the sparse/dense cut:
/// `sum_k binom(n_s, k) n_d^k M(e - k, n_s - k)`, where `k` counts cut edges
/// and the remaining matching uses only the `n_s - k` sparse vertices not
/// consumed by the cut.
pub fn sparse_interface_count(e: usize, n_s: usize, n_d: usize) -> LogNumber {
    if e > max_interface_edges(n_s, n_d) {
        return LogNumber::ZERO;
    }
    let ln_nd = (n_d as f64).ln();
    let mut acc = LogAccumulator::new();
    for k in 0..=e.min(n_s) {
        if k > 0 && n_d == 0 {
            break;
        }
        let m = sparse_matchings(e - k, n_s - k);
        if m.is_zero() {
            continue;
        }
        let cut = ln_binomial(n_s as u64, k as u64) + if k == 0 { 0.0 } else { k as f64 * ln_nd };
        acc.push(m.scale_exp(cut));
    }
    acc.total()
}

/// Labeled graphs on `n_d` vertices with `e` edges and minimum degree 2.
///
/// Computes the whole exact column for `n_d`; use [`MultiplicityTable`] when
/// many entries are needed.
pub fn min_degree_two_count(e: usize, n_d: usize) -> LogNumber {
    if !min_degree_two_feasible(e, n_d) {
        return LogNumber::ZERO;
    }
    let w = InterfaceTable::new(n_d);
    LogNumber::from_biguint(&exact::min_degree_two_column(n_d, &w)[e])
}

/// Structural support of the minimum-degree-2 count: `C_d(0, 0) = 1`; no such
/// graph on one or two vertices; otherwise `n_d <= E <= binom(n_d, 2)`.
pub fn min_degree_two_feasible(e: usize, n_d: usize) -> bool {
    match n_d {
        0 => e == 0,
        1 | 2 => false,
        _ => e >= n_d && e <= pairs(n_d),
    }
}

/// Exact integer forms of the counts.
pub mod exact {
    use super::*;

    pub fn binomial(n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        let k = k.min(n - k);
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= (n - i) as u64;
            acc /= (i + 1) as u64;
        }
        acc
    }

    pub fn matchings(e: usize, n: usize) -> BigUint {
        if 2 * e > n {
            return BigUint::zero();
        }
        // binom(n, 2e) * (2e - 1)!!
        let mut acc = binomial(n, 2 * e);
        for k in (1..2 * e).step_by(2) {
            acc *= k as u64;
        }
        acc
    }

    pub fn sparse_interface(e: usize, n_s: usize, n_d: usize) -> BigUint {
        let mut acc = BigUint::zero();
        let mut pow = BigUint::one();
        for k in 0..=e.min(n_s) {
            if k > 0 {
                pow *= n_d as u64;
            }
            acc += binomial(n_s, k) * &pow * matchings(e - k, n_s - k);
        }
        acc
    }

    /// `C_d(E, n)` for every `E` in `0..=binom(n, 2)`.
    ///
    /// With `P_s(x) = sum_j W(j, s, n - s) x^j` the generating function of
    /// placements on a set `S` of `s` vertices kept at degree <= 1,
    ///
    /// `sum_E C_d(E, n) x^E = sum_s (-1)^s binom(n, s) P_s(x) (1 + x)^binom(n - s, 2)`.
    ///
    /// The outer sum is evaluated by Horner's rule in `d = n - s`, using
    /// `binom(d + 1, 2) - binom(d, 2) = d`, so the only big-integer work is
    /// repeated multiplication by `(1 + x)`, i.e. coefficient additions.
    pub fn min_degree_two_column(n: usize, w: &InterfaceTable) -> Vec<BigUint> {
        assert!(w.max_total() >= n, "interface table too small for n = {n}");
        let len = pairs(n) + 1;
        let mut h: Vec<BigInt> = Vec::with_capacity(len);
        let mut binom_ns = BigUint::one(); // binom(n, s) with s = n - d
        let mut coeffs: Vec<BigUint> = Vec::with_capacity(n + 1);
        for s in 0..=n {
            if s > 0 {
                binom_ns = binom_ns * (n - s + 1) as u64 / s as u64;
            }
            coeffs.push(binom_ns.clone());
        }

        // d = n: a_n = binom(n, 0) P_0 = 1
        h.push(BigInt::one());
        for d in (0..n).rev() {
            // multiply by (1 + x)^d
            for _ in 0..d {
                h.push(BigInt::zero());
                for i in (1..h.len()).rev() {
                    let (lo, hi) = h.split_at_mut(i);
                    hi[0] += &lo[i - 1];
                }
            }
            let s = n - d;
            let sign = if s % 2 == 0 { Sign::Plus } else { Sign::Minus };
            for (j, wj) in w.row(s, d).iter().enumerate() {
                if wj.is_zero() {
                    continue;
                }
                let term = BigInt::from_biguint(sign, &coeffs[s] * wj);
                if j >= h.len() {
                    h.resize(j + 1, BigInt::zero());
                }
                h[j] += term;
            }
        }
        h.resize(len, BigInt::zero());
        h.into_iter()
            .enumerate()
            .map(|(e, c)| {
                c.to_biguint()
                    .unwrap_or_else(|| panic!("negative inclusion-exclusion total at n = {n}, E = {e}"))
            })
            .collect()
    }
}

/// Exact interface placement counts `W(j, s, d)` for all `s + d <= max_total`,
/// `j <= s`: placements of `j` edges on `s` degree-capped vertices, each edge
/// internal to them or joining one of them to one of `d` free vertices.
///
/// Built from the recurrence on the last capped vertex (unused, joined to a
/// free vertex, or matched to another capped vertex):
/// `W(j, s, d) = W(j, s-1, d) + d W(j-1, s-1, d) + (s-1) W(j-1, s-2, d)`.
pub struct InterfaceTable {
    max_total: usize,
    // rows[d][s][j]
    rows: Vec<Vec<Vec<BigUint>>>,
}

impl InterfaceTable {
    pub fn new(max_total: usize) -> Self {
        let rows = (0..=max_total)
            .into_par_iter()
            .map(|d| {
                let smax = max_total - d;
                let mut by_s: Vec<Vec<BigUint>> = Vec::with_capacity(smax + 1);
                for s in 0..=smax {
                    let mut row = vec![BigUint::zero(); s + 1];
                    if s == 0 {
                        row[0] = BigUint::one();
                    } else {
                        for j in 0..=s {
                            let mut v = if j < s { by_s[s - 1][j].clone() } else { BigUint::zero() };
                            if j >= 1 {
                                v += &by_s[s - 1][j - 1] * d as u64;
                                if s >= 2 && j - 1 <= s - 2 {
                                    v += &by_s[s - 2][j - 1] * (s - 1) as u64;
                                }
                            }
                            row[j] = v;
                        }
                    }
                    by_s.push(row);
                }
                by_s
            })
            .collect();
        Self { max_total, rows }
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }

    /// `W(., s, d)` indexed by `j`.
    pub fn row(&self, s: usize, d: usize) -> &[BigUint] {
        &self.rows[d][s]
    }
}

const CACHE_MAGIC: &[u8; 8] = b"ECVMTBL\0";
const CACHE_VERSION: u32 = 1;

/// Log-scale multiplicities for one graph order `N`.
///
/// `sparse[n_s][E]` holds `C_si(E, n_s, N - n_s)` for `E <= n_s`;
/// `dense[n_d][E]` holds `C_d(E, n_d)` for `E <= binom(n_d, 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityTable {
    n: usize,
    sparse: Vec<Vec<LogNumber>>,
    dense: Vec<Vec<LogNumber>>,
}

impl MultiplicityTable {
    pub fn build(n: usize) -> Self {
        let w = InterfaceTable::new(n);
        let sparse = (0..=n)
            .map(|n_s| (0..=n_s).map(|e| sparse_interface_count(e, n_s, n - n_s)).collect())
            .collect();
        // Largest columns first so the parallel tail is short.
        let mut dense: Vec<(usize, Vec<LogNumber>)> = (0..=n)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|n_d| {
                let col = exact::min_degree_two_column(n_d, &w)
                    .iter()
                    .enumerate()
                    .map(|(e, c)| {
                        if min_degree_two_feasible(e, n_d) {
                            LogNumber::from_biguint(c)
                        } else {
                            debug_assert!(c.is_zero(), "nonzero count outside support n={n_d} E={e}");
                            LogNumber::ZERO
                        }
                    })
                    .collect();
                (n_d, col)
            })
            .collect();
        dense.sort_by_key(|(n_d, _)| *n_d);
        Self {
            n,
            sparse,
            dense: dense.into_iter().map(|(_, c)| c).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn check_order(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::TableMismatch {
                table: self.n,
                requested: n,
            });
        }
        Ok(())
    }

    /// `C_si(E, n_s, N - n_s)` for `E` in `0..=n_s`.
    pub fn sparse_row(&self, n_s: usize) -> &[LogNumber] {
        &self.sparse[n_s]
    }

    /// `C_d(E, n_d)` for `E` in `0..=binom(n_d, 2)`.
    pub fn dense_column(&self, n_d: usize) -> &[LogNumber] {
        &self.dense[n_d]
    }

    pub fn cache_file_name(n: usize) -> String {
        format!("ecvm-multiplicity-n{n}-v{CACHE_VERSION}.bin")
    }

    fn payload(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.n as u32).to_le_bytes());
        for block in [&self.sparse, &self.dense] {
            for row in block.iter() {
                buf.extend_from_slice(&(row.len() as u32).to_le_bytes());
                for x in row {
                    buf.extend_from_slice(&x.ln().to_le_bytes());
                }
            }
        }
        buf
    }

    /// Binary cache: magic, format version, `N`, both tables as
    /// length-prefixed little-endian `f64` log values, then a SHA-256 of all
    /// preceding bytes.
    pub fn write_cache<W: Write>(&self, mut w: W) -> io::Result<()> {
        let payload = self.payload();
        let digest = Sha256::digest(&payload);
        w.write_all(&payload)?;
        w.write_all(&digest)?;
        Ok(())
    }

    /// Reads a cache written by [`write_cache`](Self::write_cache) and
    /// re-verifies it against fresh recomputation of selected entries.
    pub fn read_cache<R: Read>(mut r: R, n: usize) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() < CACHE_MAGIC.len() + 8 + 32 {
            return Err(Error::Cache("file truncated".into()));
        }
        let (payload, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(payload).as_slice() != digest {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let mut cur = Cursor { buf: payload, pos: 0 };
        if cur.take(8)? != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = cur.u32()?;
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("format version {version}, expected {CACHE_VERSION}")));
        }
        let stored = cur.u32()? as usize;
        if stored != n {
            return Err(Error::TableMismatch {
                table: stored,
                requested: n,
            });
        }
        let mut read_block = |expected_len: &dyn Fn(usize) -> usize| -> Result<Vec<Vec<LogNumber>>> {
            (0..=n)
                .map(|k| {
                    let len = cur.u32()? as usize;
                    if len != expected_len(k) {
                        return Err(Error::Cache(format!("row {k} has length {len}")));
                    }
                    (0..len)
                        .map(|_| {
                            let v = f64::from_le_bytes(cur.take(8)?.try_into().expect("8 bytes"));
                            if v.is_nan() || v == f64::INFINITY {
                                return Err(Error::Cache("invalid log value".into()));
                            }
                            Ok(LogNumber::from_ln(v))
                        })
                        .collect()
                })
                .collect()
        };
        let sparse = read_block(&|n_s| n_s + 1)?;
        let dense = read_block(&|n_d| pairs(n_d) + 1)?;
        if cur.pos != payload.len() {
            return Err(Error::Cache("trailing bytes".into()));
        }
        let table = Self { n, sparse, dense };
        table.spot_check()?;
        Ok(table)
    }

    /// Recomputes a sparse row and two dense columns and compares.
    pub fn spot_check(&self) -> Result<()> {
        let n = self.n;
        let close = |a: LogNumber, b: LogNumber| {
            (a.is_zero() && b.is_zero()) || (a.ln() - b.ln()).abs() <= 1e-12 * a.ln().abs().max(1.0)
        };
        let n_s = n / 2;
        for (e, &v) in self.sparse[n_s].iter().enumerate() {
            if !close(v, sparse_interface_count(e, n_s, n - n_s)) {
                return Err(Error::Cache(format!("sparse entry ({n_s}, {e}) disagrees with recomputation")));
            }
        }
        let small = n.min(12);
        let w = InterfaceTable::new(n);
        for n_d in [small, n] {
            let fresh = exact::min_degree_two_column(n_d, &w);
            for (e, (&v, c)) in self.dense[n_d].iter().zip(&fresh).enumerate() {
                if !close(v, LogNumber::from_biguint(c)) {
                    return Err(Error::Cache(format!("dense entry ({n_d}, {e}) disagrees with recomputation")));
                }
            }
        }
        Ok(())
    }

    /// Loads `dir/<cache name>` if present and valid, otherwise builds and
    /// (best effort) writes it. Without a directory, always builds.
    pub fn load_or_build(n: usize, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Ok(Self::build(n));
        };
        let path: PathBuf = dir.join(Self::cache_file_name(n));
        if path.exists() {
            let file = fs::File::open(&path)?;
            return Self::read_cache(io::BufReader::new(file), n);
        }
        let table = Self::build(n);
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        {
            let mut f = io::BufWriter::new(fs::File::create(&tmp)?);
            table.write_cache(&mut f)?;
            f.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(table)
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self.pos + k;
        if end > self.buf.len() {
            return Err(Error::Cache("file truncated".into()));
        }
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
}
