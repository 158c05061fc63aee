//! Label sequences and their periodicity algebra.
//!
//! A sequence `L` is *primitive* when it is not a proper power of a shorter
//! sequence. Every nonempty `L` has a unique primitive root, its minimum
//! repeat, and some sequences additionally split as `kernel^h ∘ tail` with
//! `h ≥ 2`. Both are read off the border (KMP failure) array: with
//! `q = n - border(n)` the smallest period, the minimum repeat is the length-`q`
//! prefix when `q | n`, and the kernel is that prefix whenever `n / q ≥ 2`.

use std::borrow::Borrow;
use std::fmt;

use crate::error::{Result, RlcError};

/// Dense edge-label id, `0..|alphabet|` within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// A finite sequence of labels. Ordered lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSeq(Vec<Label>);

impl LabelSeq {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelSeq(labels)
    }

    pub fn empty() -> Self {
        LabelSeq(Vec::new())
    }

    /// Builds a sequence from raw label ids.
    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        LabelSeq(ids.into_iter().map(Label).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn into_labels(self) -> Vec<Label> {
        self.0
    }

    pub fn concat(&self, other: &LabelSeq) -> LabelSeq {
        let mut labels = Vec::with_capacity(self.len() + other.len());
        labels.extend_from_slice(&self.0);
        labels.extend_from_slice(&other.0);
        LabelSeq(labels)
    }

    /// `self` repeated `times` times.
    pub fn power(&self, times: usize) -> LabelSeq {
        LabelSeq(self.0.repeat(times))
    }

    pub fn minimum_repeat(&self) -> Result<LabelSeq> {
        minimum_repeat(self)
    }

    pub fn is_primitive(&self) -> Result<bool> {
        is_primitive(self)
    }
}

// Vec<Label> hashes like [Label], so slice lookups into LabelSeq-keyed maps work.
impl Borrow<[Label]> for LabelSeq {
    fn borrow(&self) -> &[Label] {
        &self.0
    }
}

impl From<Vec<Label>> for LabelSeq {
    fn from(labels: Vec<Label>) -> Self {
        LabelSeq(labels)
    }
}

impl From<&[Label]> for LabelSeq {
    fn from(labels: &[Label]) -> Self {
        LabelSeq(labels.to_vec())
    }
}

impl fmt::Display for LabelSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// `L = kernel^repetitions ∘ tail` with `repetitions ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelDecomposition {
    pub kernel: LabelSeq,
    pub tail: LabelSeq,
    pub repetitions: usize,
}

impl KernelDecomposition {
    pub fn reconstruct(&self) -> LabelSeq {
        self.kernel.power(self.repetitions).concat(&self.tail)
    }
}

/// Border array: `border[i]` is the length of the longest proper border of
/// `seq[..=i]`.
pub fn border_array(seq: &[Label]) -> Vec<usize> {
    let mut border = vec![0usize; seq.len()];
    let mut q = 0usize;
    for i in 1..seq.len() {
        while q > 0 && seq[q] != seq[i] {
            q = border[q - 1];
        }
        if seq[q] == seq[i] {
            q += 1;
        }
        border[i] = q;
    }
    border
}

/// Smallest period of a nonempty slice.
pub fn smallest_period(seq: &[Label]) -> usize {
    debug_assert!(!seq.is_empty());
    let border = border_array(seq);
    seq.len() - border[seq.len() - 1]
}

/// Length of the minimum repeat of a nonempty slice.
pub fn minimum_repeat_len(seq: &[Label]) -> usize {
    let n = seq.len();
    let q = smallest_period(seq);
    if n.is_multiple_of(q) {
        q
    } else {
        n
    }
}

fn ensure_nonempty(seq: &LabelSeq) -> Result<()> {
    if seq.is_empty() {
        return Err(RlcError::InvalidSequence("the empty sequence has no minimum repeat".into()));
    }
    Ok(())
}

/// The unique shortest `L'` with `seq = L'^z`, `z ≥ 1`.
pub fn minimum_repeat(seq: &LabelSeq) -> Result<LabelSeq> {
    ensure_nonempty(seq)?;
    let len = minimum_repeat_len(seq.labels());
    Ok(LabelSeq::from(&seq.labels()[..len]))
}

pub fn is_primitive(seq: &LabelSeq) -> Result<bool> {
    ensure_nonempty(seq)?;
    Ok(minimum_repeat_len(seq.labels()) == seq.len())
}

/// The minimum repeat of `seq` if it is no longer than `k`.
pub fn k_mr(seq: &LabelSeq, k: usize) -> Result<Option<LabelSeq>> {
    if k == 0 {
        return Err(RlcError::InvalidSequence("k must be positive".into()));
    }
    let mr = minimum_repeat(seq)?;
    Ok((mr.len() <= k).then_some(mr))
}

/// Splits `seq` into `kernel^h ∘ tail` with `h ≥ 2`, if such a split exists.
pub fn kernel_decompose(seq: &LabelSeq) -> Result<Option<KernelDecomposition>> {
    ensure_nonempty(seq)?;
    let labels = seq.labels();
    let n = labels.len();
    let q = smallest_period(labels);
    let h = n / q;
    if h < 2 {
        return Ok(None);
    }
    Ok(Some(KernelDecomposition {
        kernel: LabelSeq::from(&labels[..q]),
        tail: LabelSeq::from(&labels[h * q..]),
        repetitions: h,
    }))
}

/// Number of distinct primitive sequences of length `1..=k` over an alphabet of
/// `alphabet_size` labels.
pub fn primitive_count(alphabet_size: u64, k: u32) -> Result<u128> {
    if alphabet_size == 0 || k == 0 {
        return Err(RlcError::InvalidSequence("alphabet size and k must be positive".into()));
    }
    let overflow = || RlcError::Overflow(format!("counting primitive words (|L|={alphabet_size}, k={k})"));
    let a = alphabet_size as u128;
    // per_length[i] = F(i + 1)
    let mut per_length: Vec<u128> = Vec::with_capacity(k as usize);
    let mut total: u128 = 0;
    for i in 1..=k {
        let words = a.checked_pow(i).ok_or_else(overflow)?;
        let imprimitive: u128 = (1..i).filter(|j| i % j == 0).map(|j| per_length[(j - 1) as usize]).sum();
        let f = words - imprimitive;
        per_length.push(f);
        total = total.checked_add(f).ok_or_else(overflow)?;
    }
    Ok(total)
}
