//! Trace functionals on words, in particular the trace of a free
//! semicircular family computed by counting non-crossing pairings.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{NcPoly, Word};
use crate::scalar::{parse_ratio, Scalar};

/// Default cap on `|P^j| · |P|` term products inside [`moments`].
pub const DEFAULT_TERM_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceKind {
    Semicircular,
    UserTable,
}

/// A unital tracial linear functional, specified on words.
pub trait TraceFunctional: Send + Sync {
    fn name(&self) -> &str;
    fn kind(&self) -> TraceKind;
    fn trace_word(&self, w: &Word) -> Result<Scalar>;
}

/// Trace of a free family of standard semicircular variables.
///
/// `τ(X_{l_1} ... X_{l_k})` is the number of non-crossing pair partitions of
/// `{1..k}` in which every pair joins equal letters.
#[derive(Debug, Default)]
pub struct Semicircular {
    memo: RwLock<HashMap<Vec<usize>, u128>>,
}

impl Semicircular {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of letter-respecting non-crossing pairings of `letters`.
    pub fn count_pairings(&self, letters: &[usize]) -> u128 {
        if letters.len() % 2 == 1 {
            return 0;
        }
        if letters.is_empty() {
            return 1;
        }
        let key = shape(letters);
        if let Some(&c) = self.memo.read().expect("memo lock").get(&key) {
            return c;
        }
        // pair the first letter with a matching letter at odd offset p; the
        // pairs inside and outside (0, p) cannot cross it
        let first = letters[0];
        let mut total = 0u128;
        for p in (1..letters.len()).step_by(2) {
            if letters[p] != first {
                continue;
            }
            let inner = self.count_pairings(&letters[1..p]);
            if inner == 0 {
                continue;
            }
            total += inner * self.count_pairings(&letters[p + 1..]);
        }
        self.memo.write().expect("memo lock").insert(key, total);
        total
    }
}

/// Relabels letters by order of first appearance; the pairing count only
/// depends on this shape.
fn shape(letters: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    letters
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(k) => k,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

impl TraceFunctional for Semicircular {
    fn name(&self) -> &str {
        "semicircular"
    }

    fn kind(&self) -> TraceKind {
        TraceKind::Semicircular
    }

    fn trace_word(&self, w: &Word) -> Result<Scalar> {
        let c = self.count_pairings(w.letters());
        let c = i64::try_from(c).map_err(|_| Error::InvalidArgument(format!("pairing count overflow on {w}")))?;
        Ok(Scalar::from_int(c))
    }
}

/// A trace given by an explicit table of word values; unlisted words are an error.
#[derive(Clone, Debug)]
pub struct TableTrace {
    values: HashMap<Word, Scalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub word: Vec<usize>,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_im: Option<String>,
}

impl TableTrace {
    /// Validates unitality and cyclic consistency of the table. The empty word
    /// defaults to 1 when absent.
    pub fn new<I: IntoIterator<Item = (Word, Scalar)>>(entries: I) -> Result<Self> {
        let mut values: HashMap<Word, Scalar> = HashMap::new();
        for (w, v) in entries {
            if w.letters().contains(&0) {
                return Err(Error::InvalidTraceTable(format!("letter 0 in word {w}")));
            }
            if let Some(prev) = values.get(&w) {
                if *prev != v {
                    return Err(Error::InvalidTraceTable(format!("conflicting values for {w}")));
                }
            }
            values.insert(w, v);
        }
        match values.get(&Word::empty()) {
            Some(v) if !v.is_one() => return Err(Error::InvalidTraceTable("trace of 1 must be 1".into())),
            Some(_) => {}
            None => {
                values.insert(Word::empty(), Scalar::one());
            }
        }
        for (w, v) in &values {
            let l = w.letters();
            for r in 1..l.len() {
                let rot = Word::new(l[r..].iter().chain(&l[..r]).copied().collect());
                if let Some(other) = values.get(&rot) {
                    if other != v {
                        return Err(Error::InvalidTraceTable(format!("not tracial: τ({w}) ≠ τ({rot})")));
                    }
                }
            }
        }
        Ok(Self { values })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let entries: Vec<TableEntry> = serde_json::from_str(s)?;
        let parsed = entries
            .into_iter()
            .map(|e| {
                let im = match &e.value_im {
                    Some(s) => parse_ratio(s)?,
                    None => num_rational::BigRational::default(),
                };
                Ok((Word::new(e.word), Scalar::new(parse_ratio(&e.value)?, im)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }
}

impl TraceFunctional for TableTrace {
    fn name(&self) -> &str {
        "table"
    }

    fn kind(&self) -> TraceKind {
        TraceKind::UserTable
    }

    fn trace_word(&self, w: &Word) -> Result<Scalar> {
        self.values.get(w).cloned().ok_or_else(|| Error::TraceUndefined(w.clone()))
    }
}

/// A pair partition of positions `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    k: usize,
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(k: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if k % 2 == 1 {
            return Err(Error::InvalidArgument(format!("cannot pair an odd number ({k}) of points")));
        }
        let mut seen = vec![false; k + 1];
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
            for x in [p.0, p.1] {
                if x == 0 || x > k || seen[x] {
                    return Err(Error::InvalidArgument(format!("pairs are not a partition of 1..={k}")));
                }
                seen[x] = true;
            }
        }
        if pairs.len() * 2 != k {
            return Err(Error::InvalidArgument(format!("pairs do not cover 1..={k}")));
        }
        pairs.sort_unstable();
        Ok(Self { k, pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_non_crossing(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| self.pairs.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
    }

    /// Every pair partition of `1..=k` (there are `(k-1)!!`).
    pub fn enumerate_all(k: usize) -> Vec<Pairing> {
        fn go(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            let Some((&first, tail)) = rest.split_first() else {
                out.push(acc.clone());
                return;
            };
            for idx in 0..tail.len() {
                acc.push((first, tail[idx]));
                let remaining: Vec<usize> = tail.iter().enumerate().filter(|&(j, _)| j != idx).map(|(_, &x)| x).collect();
                go(&remaining, acc, out);
                acc.pop();
            }
        }
        if k % 2 == 1 {
            return Vec::new();
        }
        let points: Vec<usize> = (1..=k).collect();
        let mut raw = Vec::new();
        go(&points, &mut Vec::new(), &mut raw);
        raw.into_iter().map(|pairs| Pairing::new(k, pairs).expect("valid by construction")).collect()
    }
}

/// `Σ_w c_w τ(w)`.
pub fn trace_poly(p: &NcPoly, tr: &dyn TraceFunctional) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (w, c) in p.terms() {
        acc += &(c * &tr.trace_word(w)?);
    }
    Ok(acc)
}

/// `[τ(P), τ(P²), ..., τ(P^k)]` by iterated exact multiplication.
pub fn moments(p: &NcPoly, k: usize, tr: &dyn TraceFunctional, budget: usize) -> Result<Vec<Scalar>> {
    if k == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(k);
    let mut power = p.clone();
    for j in 1..=k {
        out.push(trace_poly(&power, tr)?);
        if j < k {
            let work = power.len().saturating_mul(p.len());
            if work > budget {
                return Err(Error::BudgetExceeded { terms: work, budget });
            }
            power = power.mul(p)?;
        }
    }
    Ok(out)
}

/// Catalan number `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan(k: u32) -> u128 {
    (0..k).fold(1u128, |c, i| c * 2 * (2 * i as u128 + 1) / (i as u128 + 2))
}
