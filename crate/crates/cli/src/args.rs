use lh_core::groups::{make_a, make_k, make_n, IwasawaCoords, LorentzMatrix, SL2Matrix};
use lh_core::hyperbolic::{Exponent, HPoint};
use lh_core::lie::{BasisVector, LieElement};
use lh_core::numeric::parse_complex;
use lh_core::reps::{Sign, SpectralParam};
use lh_core::Complex64;

fn numbers(text: &str) -> Result<Vec<f64>, String> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let value: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        flatten(&value, &mut out)?;
        return Ok(out);
    }
    trimmed
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect()
}

fn flatten(v: &serde_json::Value, out: &mut Vec<f64>) -> Result<(), String> {
    match v {
        serde_json::Value::Array(items) => items.iter().try_for_each(|x| flatten(x, out)),
        serde_json::Value::Number(n) => {
            out.push(n.as_f64().ok_or("number out of range")?);
            Ok(())
        }
        other => Err(format!("expected a number, got {other}")),
    }
}

fn fixed<const K: usize>(text: &str) -> Result<[f64; K], String> {
    let v = numbers(text)?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {K} numbers, got {}", v.len()))
}

pub fn complex(text: &str) -> Result<Complex64, String> {
    parse_complex(text).map_err(|e| e.to_string())
}

pub fn triple(text: &str) -> Result<[f64; 3], String> {
    fixed::<3>(text)
}

pub fn pair(text: &str) -> Result<[f64; 2], String> {
    fixed::<2>(text)
}

pub fn four(text: &str) -> Result<[f64; 4], String> {
    fixed::<4>(text)
}

pub fn nine(text: &str) -> Result<[f64; 9], String> {
    fixed::<9>(text)
}

pub fn grid(text: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<usize>| format!("expected 3 node counts, got {}", v.len()))
}

pub fn matrix(entries: &[f64; 9]) -> lh_core::Result<LorentzMatrix> {
    LorentzMatrix::from_row_slice(entries)
}

pub fn sl2(e: &[f64; 4]) -> lh_core::Result<SL2Matrix> {
    SL2Matrix::new(e[0], e[1], e[2], e[3])
}

pub fn point(c: &[f64; 2]) -> lh_core::Result<HPoint> {
    HPoint::new(c[0], c[1])
}

pub fn exponent(w: Complex64) -> lh_core::Result<Exponent> {
    Exponent::new(w)
}

/// A basis name (`V1`, `V2`, `W`), three coordinates, or nine entries.
pub fn lie(text: &str) -> Result<LieElement, String> {
    if let Some(b) = BasisVector::parse(text.trim()) {
        return Ok(b.element());
    }
    let v = numbers(text)?;
    match v.len() {
        3 => Ok(LieElement::from_coords(v[0], v[1], v[2])),
        9 => LieElement::from_row_slice(&v).map_err(|e| e.to_string()),
        n => Err(format!("expected a basis name, 3 coordinates or 9 entries, got {n} numbers")),
    }
}

pub fn iwasawa_element(c: [f64; 3]) -> IwasawaCoords {
    IwasawaCoords::new(c[0], c[1], c[2])
}

/// A representation as written on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepArg {
    Trivial,
    Discrete(u32, Sign),
    Spectral(Complex64),
}

impl RepArg {
    pub fn resolve(self) -> lh_core::Result<SpectralParam> {
        match self {
            RepArg::Trivial => Ok(SpectralParam::Trivial),
            RepArg::Discrete(m, sign) => SpectralParam::discrete(m, sign),
            RepArg::Spectral(s) => SpectralParam::from_s(s),
        }
    }
}

/// `trivial`, `D+4`, `D-2`, or a spectral parameter `s`.
pub fn rep(text: &str) -> Result<RepArg, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("trivial") {
        return Ok(RepArg::Trivial);
    }
    if let Some(rest) = t.strip_prefix('D').or_else(|| t.strip_prefix('d')) {
        let (sign, digits) = match rest.chars().next() {
            Some('+') => (Sign::Plus, &rest[1..]),
            Some('-') => (Sign::Minus, &rest[1..]),
            _ => return Err(format!("discrete series needs a sign: '{t}'")),
        };
        let m: u32 = digits.parse().map_err(|e| format!("'{digits}': {e}"))?;
        return Ok(RepArg::Discrete(m, sign));
    }
    Ok(RepArg::Spectral(complex(t)?))
}

pub fn sign(text: &str) -> Result<Sign, String> {
    match text.trim() {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        other => Err(format!("sign must be + or -, got '{other}'")),
    }
}

/// A group element given as `a:T`, `n:U`, `k:THETA`, or an Iwasawa triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Translation {
    A(f64),
    N(f64),
    K(f64),
    Iwasawa([f64; 3]),
}

impl Translation {
    pub fn resolve(self) -> lh_core::Result<LorentzMatrix> {
        match self {
            Translation::A(t) => make_a(t),
            Translation::N(u) => make_n(u),
            Translation::K(th) => make_k(th),
            Translation::Iwasawa(c) => Ok(iwasawa_element(c).to_matrix()),
        }
    }
}

pub fn translation(text: &str) -> Result<Translation, String> {
    let t = text.trim();
    if let Some((kind, value)) = t.split_once(':') {
        let x: f64 = value.trim().parse().map_err(|e| format!("'{value}': {e}"))?;
        return match kind.trim() {
            "a" => Ok(Translation::A(x)),
            "n" => Ok(Translation::N(x)),
            "k" => Ok(Translation::K(x)),
            other => Err(format!("unknown subgroup '{other}'")),
        };
    }
    Ok(Translation::Iwasawa(triple(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_matrices_both_ways() {
        let flat = nine("[1,0,0,0,1,0,0,0,1]").unwrap();
        let nested = nine("[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
        assert_eq!(flat, nested);
        assert!(matrix(&flat).is_ok());
        assert!(nine("[1,2,3]").is_err());
        assert!(matrix(&[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn parses_representations() {
        assert_eq!(rep("trivial").unwrap().resolve().unwrap(), SpectralParam::Trivial);
        assert_eq!(
            rep("D+4").unwrap().resolve().unwrap(),
            SpectralParam::discrete(4, Sign::Plus).unwrap()
        );
        assert_eq!(rep("i").unwrap().resolve().unwrap(), SpectralParam::principal(1.0).unwrap());
        assert!(rep("D4").is_err());
        assert!(rep("D+3").unwrap().resolve().is_err());
    }

    #[test]
    fn parses_translations() {
        assert_eq!(translation("a:0.3").unwrap(), Translation::A(0.3));
        assert_eq!(translation("0.1,0.2,0.3").unwrap(), Translation::Iwasawa([0.1, 0.2, 0.3]));
        assert!(translation("b:1").is_err());
    }

    #[test]
    fn parses_lie_elements() {
        assert_eq!(lie("W").unwrap(), BasisVector::W.element());
        assert_eq!(lie("1,0,0").unwrap(), BasisVector::V1.element());
    }
}
