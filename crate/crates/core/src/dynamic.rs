//! Two-direction dynamic rough sets.
//!
//! A candidate set `X` is grown by outside objects whose class (under an
//! attribute set `T`) mostly lies in `X`, and shrunk by inside objects whose
//! class mostly leaks out of it. The thresholds are [`TransferStandard`]s and
//! the per-object measures are [`TransferCoefficient`]s, kept as exact ratios
//! of block counts so threshold ties are decided without rounding.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::table::{InformationTable, ObjectSet, Partition};

/// Threshold on a transfer coefficient, in `[0, 1]`.
///
/// Held as an exact fraction. Values built from an `f64` are read as decimals
/// with twelve fractional digits, so a standard of `0.1` ties with a
/// coefficient of `1/10` instead of missing it by one ulp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferStandard {
    numerator: u128,
    denominator: u128,
}

const DECIMAL_SCALE: u128 = 1_000_000_000_000;

impl TransferStandard {
    /// Standard that no coefficient reaches, so nothing transfers.
    pub const NO_TRANSFER: TransferStandard = TransferStandard {
        numerator: 1,
        denominator: 1,
    };

    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidStandard(value));
        }
        Ok(Self::reduced(to_decimal(value), DECIMAL_SCALE))
    }

    /// Arithmetic mean of `values`, each read as a twelve-digit decimal.
    /// `None` for an empty slice.
    pub fn mean(values: &[f64]) -> Result<Option<Self>> {
        if values.is_empty() {
            return Ok(None);
        }
        let mut sum = 0u128;
        for &v in values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidStandard(v));
            }
            sum += to_decimal(v);
        }
        Ok(Some(Self::reduced(sum, DECIMAL_SCALE * values.len() as u128)))
    }

    fn reduced(numerator: u128, denominator: u128) -> Self {
        let g = gcd(numerator, denominator).max(1);
        TransferStandard {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `self` compared with `num / den`.
    fn cmp_ratio(self, num: usize, den: usize) -> Ordering {
        (self.numerator * den as u128).cmp(&(num as u128 * self.denominator))
    }
}

fn to_decimal(v: f64) -> u128 {
    (v * DECIMAL_SCALE as f64).round() as u128
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `numerator / denominator` with `denominator > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferCoefficient {
    numerator: usize,
    denominator: usize,
}

impl TransferCoefficient {
    fn new(numerator: usize, denominator: usize) -> Self {
        debug_assert!(denominator > 0 && numerator <= denominator);
        TransferCoefficient {
            numerator,
            denominator,
        }
    }

    pub fn numerator(self) -> usize {
        self.numerator
    }

    pub fn denominator(self) -> usize {
        self.denominator
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `standard ≤ self < 1`.
    pub fn transfers_at(self, standard: TransferStandard) -> bool {
        self.numerator < self.denominator && !self.below(standard)
    }

    /// `self < standard`.
    pub fn below(self, standard: TransferStandard) -> bool {
        standard.cmp_ratio(self.numerator, self.denominator) == Ordering::Greater
    }
}

/// Per-object view of one `(T, X)` pair: the partition under `T` plus how much
/// of each block lies outside `X`.
struct Leakage<'a> {
    partition: &'a Partition,
    outside: Vec<usize>,
}

impl<'a> Leakage<'a> {
    fn new(partition: &'a Partition, set: &ObjectSet) -> Self {
        let outside = partition
            .overlaps(set)
            .into_iter()
            .zip(partition.blocks())
            .map(|(inside, block)| block.len() - inside)
            .collect();
        Leakage { partition, outside }
    }

    /// `|[x] ∖ X| / |[x]|`.
    fn outward(&self, object: usize) -> TransferCoefficient {
        let b = self.partition.block_index(object);
        TransferCoefficient::new(self.outside[b], self.partition.blocks()[b].len())
    }

    /// `1 − |[x] ∖ X| / |[x]|`.
    fn inward(&self, object: usize) -> TransferCoefficient {
        let b = self.partition.block_index(object);
        let size = self.partition.blocks()[b].len();
        TransferCoefficient::new(size - self.outside[b], size)
    }
}

/// Inflated main set computed on an existing partition.
pub fn inflated_main_in(partition: &Partition, set: &ObjectSet, d_plus: TransferStandard) -> ObjectSet {
    let leak = Leakage::new(partition, set);
    ObjectSet::from_indices(
        set.universe(),
        set.complement().iter().filter(|&x| leak.inward(x).transfers_at(d_plus)),
    )
}

/// Contracted main set computed on an existing partition.
pub fn contracted_main_in(partition: &Partition, set: &ObjectSet, d_minus: TransferStandard) -> ObjectSet {
    let leak = Leakage::new(partition, set);
    ObjectSet::from_indices(
        set.universe(),
        set.iter().filter(|&x| leak.outward(x).transfers_at(d_minus)),
    )
}

fn leakage_inputs<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
) -> Result<Partition> {
    table.check_set(set)?;
    table.partition(attrs)
}

/// Outward transfer coefficient `ρ⁻` of a member `x` of `set`.
pub fn outward_coefficient<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    x: &str,
) -> Result<TransferCoefficient> {
    let p = leakage_inputs(table, attrs, set)?;
    let idx = table.object_index(x)?;
    if !set.contains(idx) {
        return Err(Error::NotInSet(x.to_owned()));
    }
    Ok(Leakage::new(&p, set).outward(idx))
}

/// Inward transfer coefficient `ρ⁺` of a non-member `x`.
pub fn inward_coefficient<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    x: &str,
) -> Result<TransferCoefficient> {
    let p = leakage_inputs(table, attrs, set)?;
    let idx = table.object_index(x)?;
    if set.contains(idx) {
        return Err(Error::InSet(x.to_owned()));
    }
    Ok(Leakage::new(&p, set).inward(idx))
}

/// `M⁺ = {x ∉ X : d⁺ ≤ ρ⁺(x) < 1}`.
pub fn inflated_main_set<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    d_plus: TransferStandard,
) -> Result<ObjectSet> {
    let p = leakage_inputs(table, attrs, set)?;
    Ok(inflated_main_in(&p, set, d_plus))
}

/// `A⁺ = {x ∉ X : 0 ≤ ρ⁺(x) < d⁺}`.
pub fn inflated_assistant_set<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    d_plus: TransferStandard,
) -> Result<ObjectSet> {
    let p = leakage_inputs(table, attrs, set)?;
    let leak = Leakage::new(&p, set);
    Ok(ObjectSet::from_indices(
        set.universe(),
        set.complement()
            .iter()
            .filter(|&x| leak.inward(x).below(d_plus)),
    ))
}

/// `M⁻ = {x ∈ X : d⁻ ≤ ρ⁻(x) < 1}`.
pub fn contracted_main_set<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    d_minus: TransferStandard,
) -> Result<ObjectSet> {
    let p = leakage_inputs(table, attrs, set)?;
    Ok(contracted_main_in(&p, set, d_minus))
}

/// `A⁻ = {x ∈ X : 0 ≤ ρ⁻(x) < d⁻}`.
pub fn contracted_assistant_set<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    d_minus: TransferStandard,
) -> Result<ObjectSet> {
    let p = leakage_inputs(table, attrs, set)?;
    let leak = Leakage::new(&p, set);
    Ok(ObjectSet::from_indices(
        set.universe(),
        set.iter().filter(|&x| leak.outward(x).below(d_minus)),
    ))
}

/// `X ∪ M⁺`.
pub fn inflated_set<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    d_plus: TransferStandard,
) -> Result<ObjectSet> {
    Ok(set.union(&inflated_main_set(table, attrs, set, d_plus)?))
}

/// `X ∖ M⁻`.
pub fn contracted_set<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    set: &ObjectSet,
    d_minus: TransferStandard,
) -> Result<ObjectSet> {
    Ok(set.difference(&contracted_main_set(table, attrs, set, d_minus)?))
}

/// Two-direction dynamic set: contract `X` by its low-priority attributes,
/// then add the objects pulled in by the high-priority ones.
///
/// `(X ∖ M⁻_{contract}(X)) ∪ M⁺_{expand}(X)`; both transfer sets are taken
/// relative to the original `X`.
pub fn two_direction_set<E: AsRef<str>, C: AsRef<str>>(
    table: &InformationTable,
    expand: &[E],
    d_plus: TransferStandard,
    contract: &[C],
    d_minus: TransferStandard,
    set: &ObjectSet,
) -> Result<ObjectSet> {
    let inflated = inflated_main_set(table, expand, set, d_plus)?;
    let contracted = contracted_main_set(table, contract, set, d_minus)?;
    Ok(set.difference(&contracted).union(&inflated))
}

/// D-lower approximation: classical lower approximation of a dynamic set.
pub fn d_lower_approx<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    x_star: &ObjectSet,
) -> Result<ObjectSet> {
    table.lower_approx(attrs, x_star)
}

/// D-upper approximation: classical upper approximation of a dynamic set.
pub fn d_upper_approx<S: AsRef<str>>(
    table: &InformationTable,
    attrs: &[S],
    x_star: &ObjectSet,
) -> Result<ObjectSet> {
    table.upper_approx(attrs, x_star)
}

/// Every set the two-direction calculus produces for one `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicSetBundle {
    pub inflated_main: ObjectSet,
    pub inflated_assistant: ObjectSet,
    pub contracted_main: ObjectSet,
    pub contracted_assistant: ObjectSet,
    pub two_direction: ObjectSet,
    pub d_lower: ObjectSet,
    pub d_upper: ObjectSet,
}

impl DynamicSetBundle {
    /// Inflation uses `expand`, contraction uses `contract`, and the D-lower and
    /// D-upper approximations are taken under `approx`.
    #[allow(clippy::too_many_arguments)]
    pub fn compute<E: AsRef<str>, C: AsRef<str>, Q: AsRef<str>>(
        table: &InformationTable,
        expand: &[E],
        d_plus: TransferStandard,
        contract: &[C],
        d_minus: TransferStandard,
        approx: &[Q],
        set: &ObjectSet,
    ) -> Result<Self> {
        let inflated_main = inflated_main_set(table, expand, set, d_plus)?;
        let inflated_assistant = inflated_assistant_set(table, expand, set, d_plus)?;
        let contracted_main = contracted_main_set(table, contract, set, d_minus)?;
        let contracted_assistant = contracted_assistant_set(table, contract, set, d_minus)?;
        let two_direction = set.difference(&contracted_main).union(&inflated_main);
        let q = table.partition(approx)?;
        Ok(DynamicSetBundle {
            d_lower: q.lower(&two_direction),
            d_upper: q.upper(&two_direction),
            inflated_main,
            inflated_assistant,
            contracted_main,
            contracted_assistant,
            two_direction,
        })
    }
}
