//! JSON wire formats for the exchange types.
//!
//! Complex vectors travel as flat interleaved `[re, im, …]` arrays, matching
//! the internal layout:
//!
//! * `KernelCombo`: `{"alpha": a, "terms": [{"re","im","z":[…],"t","h"}]}`
//! * `AtomicMeasure`: `{"atoms": [{"z":[…],"t","h","mass"}]}`
//! * `BallFamily`: `{"balls": [{"center": {"z":[…],"t"}, "r"}]}`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::KernelCombo;
use crate::error::{Error, Result};
use crate::geometry::{Ball, BallFamily, HPoint, UPoint};
use crate::kernels::KernelParams;
use crate::potential::AtomicMeasure;

fn z_to_flat(z: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * z.len());
    for c in z {
        out.push(c.re);
        out.push(c.im);
    }
    out
}

fn flat_to_z(flat: &[f64]) -> Result<Vec<Complex64>> {
    if flat.len() % 2 != 0 {
        return Err(Error::InvalidParam(format!(
            "interleaved complex array has odd length {}",
            flat.len()
        )));
    }
    Ok(flat
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelComboTermJson {
    pub re: f64,
    pub im: f64,
    pub z: Vec<f64>,
    pub t: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelComboJson {
    pub alpha: f64,
    pub terms: Vec<KernelComboTermJson>,
}

impl KernelComboJson {
    pub fn from_combo(combo: &KernelCombo) -> Self {
        Self {
            alpha: combo.params.alpha,
            terms: combo
                .terms
                .iter()
                .map(|(c, u)| KernelComboTermJson {
                    re: c.re,
                    im: c.im,
                    z: z_to_flat(&u.base.z),
                    t: u.base.t,
                    h: u.h,
                })
                .collect(),
        }
    }

    pub fn into_combo(&self, n: usize) -> Result<KernelCombo> {
        let params = KernelParams::new(n, self.alpha)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok((
                    Complex64::new(t.re, t.im),
                    UPoint::new(HPoint::new(flat_to_z(&t.z)?, t.t), t.h),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        KernelCombo::new(params, terms)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub z: Vec<f64>,
    pub t: f64,
    pub h: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomicMeasureJson {
    pub atoms: Vec<AtomJson>,
}

impl AtomicMeasureJson {
    pub fn from_measure(mu: &AtomicMeasure) -> Self {
        Self {
            atoms: mu
                .atoms
                .iter()
                .map(|(u, m)| AtomJson {
                    z: z_to_flat(&u.base.z),
                    t: u.base.t,
                    h: u.h,
                    mass: *m,
                })
                .collect(),
        }
    }

    pub fn into_measure(&self) -> Result<AtomicMeasure> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok((
                    UPoint::new(HPoint::new(flat_to_z(&a.z)?, a.t), a.h),
                    a.mass,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        AtomicMeasure::new(atoms)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallCenterJson {
    pub z: Vec<f64>,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallJson {
    pub center: BallCenterJson,
    pub r: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallFamilyJson {
    pub balls: Vec<BallJson>,
}

impl BallFamilyJson {
    pub fn from_family(f: &BallFamily) -> Self {
        Self {
            balls: f
                .balls
                .iter()
                .map(|b| BallJson {
                    center: BallCenterJson { z: z_to_flat(&b.center.z), t: b.center.t },
                    r: b.r,
                })
                .collect(),
        }
    }

    pub fn into_family(&self) -> Result<BallFamily> {
        let balls = self
            .balls
            .iter()
            .map(|b| {
                Ok(Ball {
                    center: HPoint::new(flat_to_z(&b.center.z)?, b.center.t),
                    r: b.r,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BallFamily::new(balls))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combo_roundtrip() {
        let p = KernelParams::new(1, 0.75).unwrap();
        let combo = KernelCombo::new(
            p,
            vec![(
                Complex64::new(1.5, -0.5),
                UPoint::new(HPoint::new(vec![Complex64::new(0.1, 0.2)], 0.3), 0.4),
            )],
        )
        .unwrap();
        let json = serde_json::to_string(&KernelComboJson::from_combo(&combo)).unwrap();
        let back: KernelComboJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_combo(1).unwrap(), combo);
    }

    #[test]
    fn measure_and_family_roundtrip() {
        let mu = AtomicMeasure::new(vec![(
            UPoint::new(HPoint::new(vec![Complex64::new(-1.0, 2.0)], 0.5), 0.0),
            3.25,
        )])
        .unwrap();
        let j = serde_json::to_string(&AtomicMeasureJson::from_measure(&mu)).unwrap();
        let back: AtomicMeasureJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.into_measure().unwrap(), mu);

        let fam = BallFamily::new(vec![Ball {
            center: HPoint::new(vec![Complex64::new(0.0, 1.0)], -2.0),
            r: 1.5,
        }]);
        let j = serde_json::to_string(&BallFamilyJson::from_family(&fam)).unwrap();
        let back: BallFamilyJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.into_family().unwrap(), fam);
    }

    #[test]
    fn odd_interleaved_length_rejected() {
        let bad = AtomicMeasureJson {
            atoms: vec![AtomJson { z: vec![1.0, 2.0, 3.0], t: 0.0, h: 0.0, mass: 1.0 }],
        };
        assert!(bad.into_measure().is_err());
    }
}
