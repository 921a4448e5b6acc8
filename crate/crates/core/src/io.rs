//! JSON interchange for rings, ideals and pseudomatrices.
//!
//! Integers are serialized as decimal strings (JSON numbers are accepted on
//! input); elements are coordinate arrays, optionally `{num, den}` for
//! fractions; ideals are either generator lists or explicit basis matrices.
//! Field order is fixed by the structs, so outputs are byte-reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ideal::{FracIdeal, Ideal};
use crate::intmat::IntMat;
use crate::pseudo::{PseudoHnfResult, PseudoMatrix};
use crate::ring::{FieldElement, NumberRing, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(JsonInt(BigInt::from(n))),
            Raw::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|_| D::Error::custom(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingSpec {
    Name(String),
    Inline {
        degree: usize,
        structure_constants: Vec<Vec<Vec<JsonInt>>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        labels: Vec<String>,
    },
}

pub fn ring_from_spec(spec: &RingSpec) -> Result<NumberRing> {
    match spec {
        RingSpec::Name(name) => match name.as_str() {
            "Z" => Ok(NumberRing::integers()),
            "Zi" => Ok(NumberRing::gaussian()),
            "Zsqrt10" => NumberRing::quadratic(10),
            other => Err(Error::Parse(format!(
                "unknown ring preset {other:?} (known: Z, Zi, Zsqrt10)"
            ))),
        },
        RingSpec::Inline { degree, structure_constants, labels } => {
            if structure_constants.len() != *degree {
                return Err(Error::Parse("structure_constants length != degree".into()));
            }
            let gamma = structure_constants
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect())
                .collect();
            NumberRing::from_structure_constants(gamma, labels.clone())
        }
    }
}

pub fn spec_for_ring(ring: &NumberRing) -> RingSpec {
    // Round-trip as an inline table; presets keep their name when the caller
    // passes it through unchanged.
    let d = ring.degree();
    let table = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| JsonInt(ring.gamma_at(i, j, k).clone())).collect())
                .collect()
        })
        .collect();
    RingSpec::Inline {
        degree: d,
        structure_constants: table,
        labels: ring.labels().to_vec(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Coords(Vec<JsonInt>),
    Frac { num: Vec<JsonInt>, den: JsonInt },
}

pub fn element_from_spec(ring: &NumberRing, spec: &ElementSpec) -> Result<FieldElement> {
    let (coords, den) = match spec {
        ElementSpec::Coords(c) => (c, BigInt::from(1)),
        ElementSpec::Frac { num, den } => (num, den.0.clone()),
    };
    if coords.len() != ring.degree() {
        return Err(Error::Parse(format!(
            "element has {} coordinates, ring degree is {}",
            coords.len(),
            ring.degree()
        )));
    }
    let elem = RingElement::new(coords.iter().map(|x| x.0.clone()).collect());
    FieldElement::new(elem, den).map_err(|_| Error::Parse("zero denominator".into()))
}

pub fn spec_for_element(x: &FieldElement) -> ElementSpec {
    let coords = x.num().coords().iter().map(|c| JsonInt(c.clone())).collect();
    if x.is_integral() {
        ElementSpec::Coords(coords)
    } else {
        ElementSpec::Frac { num: coords, den: JsonInt(x.den().clone()) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    Generators {
        generators: Vec<ElementSpec>,
    },
    Basis {
        basis: Vec<Vec<JsonInt>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        denominator: Option<JsonInt>,
    },
}

pub fn ideal_from_spec(ring: &NumberRing, spec: &IdealSpec) -> Result<FracIdeal> {
    match spec {
        IdealSpec::Generators { generators } => {
            if generators.is_empty() {
                return Err(Error::ZeroIdeal);
            }
            let gens: Vec<FieldElement> = generators
                .iter()
                .map(|g| element_from_spec(ring, g))
                .collect::<Result<_>>()?;
            let mut den = BigInt::from(1);
            for g in &gens {
                den = den.lcm(g.den());
            }
            let integral: Vec<RingElement> = gens
                .iter()
                .map(|g| ring.scale(g.num(), &(&den / g.den())))
                .collect();
            FracIdeal::new(Ideal::from_generators(ring, &integral)?, den)
        }
        IdealSpec::Basis { basis, denominator } => {
            let rows: Vec<Vec<BigInt>> = basis
                .iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect();
            let ideal = Ideal::from_basis_checked(ring, IntMat::from_rows(rows))?;
            let den = denominator.as_ref().map_or(BigInt::from(1), |d| d.0.clone());
            FracIdeal::new(ideal, den)
        }
    }
}

fn basis_spec(m: &IntMat) -> Vec<Vec<JsonInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| JsonInt(x.clone())).collect())
        .collect()
}

pub fn spec_for_ideal(ideal: &Ideal) -> IdealSpec {
    IdealSpec::Basis { basis: basis_spec(ideal.basis()), denominator: None }
}

pub fn spec_for_frac_ideal(ideal: &FracIdeal) -> IdealSpec {
    IdealSpec::Basis {
        basis: basis_spec(ideal.num().basis()),
        denominator: if ideal.is_integral() {
            None
        } else {
            Some(JsonInt(ideal.den().clone()))
        },
    }
}

/// An input pseudomatrix file; the ring may come from the file or from the
/// command line.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoMatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    pub ideals: Vec<IdealSpec>,
    pub matrix: Vec<Vec<ElementSpec>>,
}

pub fn pseudomatrix_from_file(ring: &NumberRing, file: &PseudoMatrixFile) -> Result<PseudoMatrix> {
    let ideals = file
        .ideals
        .iter()
        .map(|s| ideal_from_spec(ring, s))
        .collect::<Result<Vec<_>>>()?;
    let matrix = file
        .matrix
        .iter()
        .map(|row| row.iter().map(|e| element_from_spec(ring, e)).collect())
        .collect::<Result<Vec<_>>>()?;
    PseudoMatrix::new(ideals, matrix)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitSpec {
    pub a_basis: Vec<Vec<JsonInt>>,
    pub b_basis: Vec<Vec<JsonInt>>,
    pub m_z: JsonInt,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateSpec {
    pub modulus_basis: Vec<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSpec>,
    pub span_hash: String,
}

/// Output file: a pseudo-HNF in the same shape as the input plus the
/// certificate block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoHnfFile {
    pub ring: RingSpec,
    pub ideals: Vec<IdealSpec>,
    pub matrix: Vec<Vec<ElementSpec>>,
    pub certificate: CertificateSpec,
}

pub fn file_for_result(ring_spec: &RingSpec, result: &PseudoHnfResult) -> PseudoHnfFile {
    let cert = &result.certificate;
    PseudoHnfFile {
        ring: ring_spec.clone(),
        ideals: result.hnf.ideals.iter().map(spec_for_ideal).collect(),
        matrix: result
            .hnf
            .matrix
            .iter()
            .map(|row| row.iter().map(spec_for_element).collect())
            .collect(),
        certificate: CertificateSpec {
            modulus_basis: basis_spec(cert.modulus.basis()),
            split: cert.split.as_ref().map(|s| SplitSpec {
                a_basis: basis_spec(s.a.basis()),
                b_basis: basis_spec(s.b.basis()),
                m_z: JsonInt(s.m_z.clone()),
            }),
            span_hash: cert.span_hash.clone(),
        },
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_specs_round_trip() {
        for name in ["Z", "Zi", "Zsqrt10"] {
            let ring = ring_from_spec(&RingSpec::Name(name.into())).unwrap();
            let spec = spec_for_ring(&ring);
            let again = ring_from_spec(&spec).unwrap();
            assert_eq!(ring, again);
        }
        assert!(ring_from_spec(&RingSpec::Name("Zweird".into())).is_err());
    }

    #[test]
    fn parse_pseudomatrix_file() {
        let text = r#"{
            "ring": "Zsqrt10",
            "ideals": [
                {"generators": [[2, 0], [0, 1]]},
                {"basis": [[1, 0], [0, 1]]}
            ],
            "matrix": [
                [[1, 0], [0, 0]],
                [{"num": [1, 2], "den": 3}, [4, 5]]
            ]
        }"#;
        let file: PseudoMatrixFile = parse_json(text).unwrap();
        let ring = ring_from_spec(file.ring.as_ref().unwrap()).unwrap();
        let p = pseudomatrix_from_file(&ring, &file).unwrap();
        assert_eq!(p.nrows(), 2);
        assert_eq!(p.ideals[0].num().norm(), &BigInt::from(2));
        assert_eq!(p.matrix[1][0].den(), &BigInt::from(3));
    }

    #[test]
    fn big_integers_survive_as_strings() {
        let text = r#"{"ideals": [{"generators": [["123456789012345678901234567890"]]}],
                       "matrix": [[["1"]]]}"#;
        let file: PseudoMatrixFile = parse_json(text).unwrap();
        let ring = NumberRing::integers();
        let p = pseudomatrix_from_file(&ring, &file).unwrap();
        assert_eq!(
            p.ideals[0].num().norm().to_string(),
            "123456789012345678901234567890"
        );
        // Serialization always emits strings.
        let s = to_json_string(&JsonInt(BigInt::from(42)));
        assert_eq!(s, "\"42\"\n");
    }

    #[test]
    fn malformed_input_is_a_parse_error() {
        assert!(matches!(
            parse_json::<PseudoMatrixFile>("{ not json"),
            Err(Error::Parse(_))
        ));
        // Wrong coordinate count surfaces as a parse error too.
        let ring = NumberRing::gaussian();
        let bad = ElementSpec::Coords(vec![JsonInt(BigInt::from(1))]);
        assert!(matches!(element_from_spec(&ring, &bad), Err(Error::Parse(_))));
    }

    #[test]
    fn fractional_ideal_literals() {
        let ring = NumberRing::quadratic(10).unwrap();
        // Generators sqrt10/2 and 1: the ideal (1/2)(2, sqrt10) + O = O + ...
        let spec = IdealSpec::Generators {
            generators: vec![ElementSpec::Frac {
                num: vec![JsonInt(BigInt::from(0)), JsonInt(BigInt::from(1))],
                den: JsonInt(BigInt::from(2)),
            }],
        };
        let f = ideal_from_spec(&ring, &spec).unwrap();
        // (sqrt10/2) as a fractional principal ideal: norm of num / den^d.
        assert_eq!(f.den(), &BigInt::from(2));
        let round = spec_for_frac_ideal(&f);
        let again = ideal_from_spec(&ring, &round).unwrap();
        assert_eq!(f, again);
    }
}
