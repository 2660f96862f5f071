use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::TransferVec;
use crate::error::Result;
use crate::qpd::{HierarchyLevel, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// All `T^{k/n}`, `k = 1..8n`: the cyclic group generated by `T^{1/n}`.
    FullG,
    /// The Clifford members of the group: `{I, S, Z, ZS}`.
    CliffordC,
    /// `{I, ε(T^{1/n}), Z}`.
    ThreeChannel,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::FullG => "full-g",
            Self::CliffordC => "clifford",
            Self::ThreeChannel => "three-channel",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One implementable channel: a (possibly dephased) Z rotation by a multiple of `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub label: String,
    /// Lowest hierarchy level containing this gate; [`HierarchyLevel::S`] for Cliffords.
    pub level: HierarchyLevel,
    /// Ideal rotation angle.
    pub angle: f64,
    /// Dephasing applied at construction (zero for Cliffords).
    pub p_eff: f64,
    pub magic_cost: f64,
    pub transfer: TransferVec,
}

impl BasisElement {
    pub fn rotation(label: impl Into<String>, angle: f64, p_eff: f64, level: HierarchyLevel) -> Result<Self> {
        let p_eff = if level.is_clifford() { 0.0 } else { p_eff };
        Ok(Self {
            label: label.into(),
            level,
            angle,
            p_eff,
            magic_cost: level.magic_cost(),
            transfer: TransferVec::rz(angle)?.dephase(p_eff)?,
        })
    }

    /// `T^{k/n}` with dephasing from `noise` at its reduced level.
    fn power(k: u64, level: HierarchyLevel, noise: &NoiseModel) -> Result<Self> {
        let (k_red, reduced) = reduce(k, level);
        let angle = k as f64 * level.phi();
        let label = power_label(k_red, reduced);
        let p_eff = noise.p_eff(reduced)?;
        Self::rotation(label, angle, p_eff, reduced)
    }
}

/// Strip common factors of two from `T^{k/n}` until `k` is odd or the gate is Clifford.
fn reduce(mut k: u64, level: HierarchyLevel) -> (u64, HierarchyLevel) {
    let mut idx = level.index();
    while idx > 0 && k % 2 == 0 {
        k /= 2;
        idx -= 1;
    }
    (k, HierarchyLevel::from_index(idx).expect("reduced index stays in range"))
}

fn power_label(k: u64, level: HierarchyLevel) -> String {
    const CLIFFORD: [&str; 4] = ["I", "S", "Z", "ZS"];
    const T_LEVEL: [&str; 8] = ["I", "T", "S", "ST", "Z", "ZT", "ZS", "ZST"];
    match level.index() {
        0 => String::from(CLIFFORD[(k % 4) as usize]),
        1 => String::from(T_LEVEL[(k % 8) as usize]),
        i => format!("T^({}/{})", k, 1u64 << (i - 1)),
    }
}

/// A labelled collection of candidate channels.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub id: String,
    pub elements: Vec<BasisElement>,
}

impl BasisSet {
    pub fn build(kind: BasisKind, level: HierarchyLevel, noise: &NoiseModel) -> Result<Self> {
        let id = format!("{}:n={}:p={}", kind, level, noise.p());
        let order = 4u64 << level.index(); // 8n
        let elements = match kind {
            BasisKind::FullG => (0..order)
                .map(|k| BasisElement::power(k, level, noise))
                .collect::<Result<Vec<_>>>()?,
            BasisKind::CliffordC => {
                // multiples of S inside the group
                let step = order / 4;
                (0..4)
                    .map(|j| BasisElement::power(j * step, level, noise))
                    .collect::<Result<Vec<_>>>()?
            }
            BasisKind::ThreeChannel => alloc::vec![
                BasisElement::power(0, level, noise)?,
                BasisElement::power(1, level, noise)?,
                BasisElement::power(order / 2, level, noise)?,
            ],
        };
        Ok(Self { id, elements })
    }

    pub fn custom(id: impl Into<String>, elements: Vec<BasisElement>) -> Self {
        Self {
            id: id.into(),
            elements,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&BasisElement> {
        self.elements.iter().find(|e| e.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn lvl(n: f64) -> HierarchyLevel {
        HierarchyLevel::from_n(n).unwrap()
    }

    #[test]
    fn full_g_at_t_level_matches_named_group() {
        let b = BasisSet::build(BasisKind::FullG, lvl(1.0), &NoiseModel::noiseless()).unwrap();
        let labels: Vec<&str> = b.elements.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["I", "T", "S", "ST", "Z", "ZT", "ZS", "ZST"]);
        for (k, e) in b.elements.iter().enumerate() {
            let want = TransferVec::rz(k as f64 * PI / 4.0).unwrap();
            assert!(e.transfer.max_abs_diff(&want) < 1e-15);
        }
        let costs: Vec<f64> = b.elements.iter().map(|e| e.magic_cost).collect();
        assert_eq!(costs, [0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn full_g_size_is_8n() {
        for n in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let b = BasisSet::build(BasisKind::FullG, lvl(n), &NoiseModel::noiseless()).unwrap();
            assert_eq!(b.len(), (8.0 * n) as usize);
        }
    }

    #[test]
    fn clifford_subset_has_zero_cost() {
        let b = BasisSet::build(BasisKind::CliffordC, lvl(0.5), &NoiseModel::noiseless()).unwrap();
        for want in ["I", "S", "Z"] {
            assert_eq!(b.get(want).unwrap().magic_cost, 0.0);
        }
        let b8 = BasisSet::build(
            BasisKind::CliffordC,
            lvl(8.0),
            &NoiseModel::linear_bound(0.01).unwrap(),
        )
        .unwrap();
        let labels: Vec<&str> = b8.elements.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["I", "S", "Z", "ZS"]);
        assert!(b8.elements.iter().all(|e| e.p_eff == 0.0));
    }

    #[test]
    fn three_channel_middle_is_dephased_root_of_t() {
        let noise = NoiseModel::linear_bound(0.001).unwrap();
        let b = BasisSet::build(BasisKind::ThreeChannel, lvl(2.0), &noise).unwrap();
        assert_eq!(b.len(), 3);
        let mid = &b.elements[1];
        assert_eq!(mid.label, "T^(1/2)");
        let want = TransferVec::rz(PI / 8.0).unwrap().dephase(0.0015).unwrap();
        assert!(mid.transfer.max_abs_diff(&want) < 1e-15);
        assert_eq!(mid.magic_cost, 1.5);
        assert_eq!(b.elements[0].label, "I");
        assert_eq!(b.elements[2].label, "Z");
    }

    #[test]
    fn reduced_levels_in_full_g() {
        let noise = NoiseModel::linear_bound(0.001).unwrap();
        let b = BasisSet::build(BasisKind::FullG, lvl(4.0), &noise).unwrap();
        assert_eq!(b.elements[2].label, "T^(1/2)");
        assert_eq!(b.elements[2].level, lvl(2.0));
        assert_eq!(b.elements[3].label, "T^(3/4)");
        assert_eq!(b.elements[4].label, "T");
        assert_eq!(b.elements[8].label, "S");
        assert_eq!(b.elements[8].p_eff, 0.0);
        assert!((b.elements[3].p_eff - 0.00175).abs() < 1e-18);
    }
}
