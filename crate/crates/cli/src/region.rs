//! Region labels of the parameter plane, built from the sign predicates only.

use serde::{Deserialize, Serialize};
use z2n_core::abel::{b_criterion, sign_certificate_a_with, sign_certificate_b_with, UniquenessCondition};
use z2n_core::equilibria::{count_equilibria_with, quadratic_form};
use z2n_core::{Params, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QClass {
    #[serde(rename = "Q_neg")]
    Neg,
    #[serde(rename = "Q_zero_band")]
    ZeroBand,
    #[serde(rename = "Q_pos")]
    Pos,
}

impl QClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            QClass::Neg => "Q_neg",
            QClass::ZeroBand => "Q_zero_band",
            QClass::Pos => "Q_pos",
        }
    }

    fn of(value: f64, band: f64) -> Self {
        if value > band {
            QClass::Pos
        } else if value < -band {
            QClass::Neg
        } else {
            QClass::ZeroBand
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BClass {
    #[serde(rename = "B_sign_definite")]
    SignDefinite,
    #[serde(rename = "B_sign_changing")]
    SignChanging,
}

impl BClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BClass::SignDefinite => "B_sign_definite",
            BClass::SignChanging => "B_sign_changing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum P2s2Class {
    #[serde(rename = "p2s2_neg")]
    Neg,
    #[serde(rename = "p2s2_nonneg")]
    Nonneg,
}

impl P2s2Class {
    pub fn as_str(&self) -> &'static str {
        match self {
            P2s2Class::Neg => "p2s2_neg",
            P2s2Class::Nonneg => "p2s2_nonneg",
        }
    }
}

/// Which criterion decides the `B` component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BForm {
    /// Sign change of the Abel coefficient `B` itself.
    #[default]
    Corrected,
    /// `Q(2 p1, p2) >= 0`, the shading of the region figure.
    Q2p1,
}

impl std::str::FromStr for BForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "corrected" => Ok(BForm::Corrected),
            "q2p1" => Ok(BForm::Q2p1),
            _ => Err(format!("unknown B form `{s}` (expected corrected or q2p1)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionColor {
    White,
    Blue,
    DarkBlue,
    Yellow,
    Green,
    DarkGreen,
    /// `|s2| <= 1`: outside the theorems.
    Excluded,
}

impl RegionColor {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionColor::White => "white",
            RegionColor::Blue => "blue",
            RegionColor::DarkBlue => "dark-blue",
            RegionColor::Yellow => "yellow",
            RegionColor::Green => "green",
            RegionColor::DarkGreen => "dark-green",
            RegionColor::Excluded => "excluded",
        }
    }

    pub fn hex(&self) -> &'static str {
        match self {
            RegionColor::White => "#ffffff",
            RegionColor::Blue => "#9ecae1",
            RegionColor::DarkBlue => "#2171b5",
            RegionColor::Yellow => "#fee391",
            RegionColor::Green => "#a1d99b",
            RegionColor::DarkGreen => "#238b45",
            RegionColor::Excluded => "#d9d9d9",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub q: QClass,
    pub b: BClass,
    pub p2s2: P2s2Class,
    /// `|s2| > 1`.
    pub hypotheses: bool,
    pub count: Option<usize>,
    /// Uniqueness conditions that hold; `None` where the Abel reduction is undefined.
    pub uniqueness: Option<Vec<UniquenessCondition>>,
}

impl RegionLabel {
    pub fn tag(&self) -> String {
        format!("{}|{}|{}", self.q.as_str(), self.b.as_str(), self.p2s2.as_str())
    }

    pub fn uniqueness_str(&self) -> &'static str {
        match self.uniqueness.as_deref() {
            None => "",
            Some([]) => "none",
            Some([UniquenessCondition::I]) => "i",
            Some([UniquenessCondition::Ii]) => "ii",
            Some(_) => "i+ii",
        }
    }

    /// Blue where `Q(p1,p2) >= 0`, yellow where `B` changes sign, green on both;
    /// blue and green darken where `p2 s2 < 0`.
    pub fn color(&self) -> RegionColor {
        if !self.hypotheses {
            return RegionColor::Excluded;
        }
        let blue = self.q != QClass::Neg;
        let yellow = self.b == BClass::SignChanging;
        let dark = self.p2s2 == P2s2Class::Neg;
        match (blue, yellow, dark) {
            (true, true, true) => RegionColor::DarkGreen,
            (true, true, false) => RegionColor::Green,
            (true, false, true) => RegionColor::DarkBlue,
            (true, false, false) => RegionColor::Blue,
            (false, true, _) => RegionColor::Yellow,
            (false, false, _) => RegionColor::White,
        }
    }
}

/// Quadratic-form values behind a label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionValues {
    pub q: f64,
    pub q_2p1: f64,
    pub b_criterion: f64,
}

pub fn region_values(params: &Params) -> RegionValues {
    RegionValues {
        q: quadratic_form(params.p1(), params.p2(), params).value,
        q_2p1: quadratic_form(2.0 * params.p1(), params.p2(), params).value,
        b_criterion: b_criterion(params),
    }
}

/// Closed-form sign decisions; the dense-sampling certificate is consulted
/// only inside the tolerance band.
pub fn region_label(params: &Params, tol: &Tolerances, b_form: BForm) -> RegionLabel {
    let v = region_values(params);
    let (p1, p2, n) = (params.p1(), params.p2(), params.n() as f64);
    let hypotheses = params.s2().abs() > 1.0;

    let q = QClass::of(v.q, tol.q_band(p1 * p1 + p2 * p2));
    let a_changes = match q {
        QClass::Pos => Some(true),
        QClass::Neg => Some(false),
        QClass::ZeroBand => sign_certificate_a_with(params, tol).ok().map(|c| c.changes_sign),
    };
    let b_band = tol.q_band(4.0 * p1 * p1 + (n + 1.0) * (n + 1.0) * p2 * p2);
    let b_changes = match QClass::of(v.b_criterion, b_band) {
        QClass::Pos => Some(true),
        QClass::Neg => Some(false),
        QClass::ZeroBand => sign_certificate_b_with(params, tol).ok().map(|c| c.changes_sign),
    };
    let b = match b_form {
        BForm::Corrected => b_changes.unwrap_or(v.b_criterion > 0.0),
        BForm::Q2p1 => v.q_2p1 >= 0.0,
    };
    let uniqueness = match (hypotheses && p2 != 0.0, a_changes, b_changes) {
        (true, Some(a), Some(b)) => {
            let mut c = Vec::new();
            if !a {
                c.push(UniquenessCondition::I);
            }
            if !b {
                c.push(UniquenessCondition::Ii);
            }
            Some(c)
        }
        _ => None,
    };
    RegionLabel {
        q,
        b: if b { BClass::SignChanging } else { BClass::SignDefinite },
        p2s2: if p2 * params.s2() < 0.0 { P2s2Class::Neg } else { P2s2Class::Nonneg },
        hypotheses,
        count: if hypotheses { count_equilibria_with(params, tol).ok().map(|c| c.count) } else { None },
        uniqueness,
    }
}
