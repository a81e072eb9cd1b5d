//! Native BN254 kernels for `nicknames.algebra`.
//!
//! Group elements cross the boundary as opaque handles; scalars cross as
//! 32-byte big-endian strings. The byte encodings produced here must match
//! `nicknames/algebra/_pybn254.py` exactly.

use ark_bn254::{Bn254, Fq, Fq12, Fq2, Fq6, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::short_weierstrass::SWCurveConfig;
use ark_ec::{AffineRepr, CurveGroup, PrimeGroup};
use ark_ff::{BigInteger, Field, One, PrimeField, Zero};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

const FLAG_LARGEST: u8 = 0x80;
const FLAG_INFINITY: u8 = 0x40;
const FLAG_MASK: u8 = 0xC0;

fn err(msg: &str) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn fq_to_be(x: &Fq) -> Vec<u8> {
    x.into_bigint().to_bytes_be()
}

fn fq_from_be(bytes: &[u8]) -> PyResult<Fq> {
    let mut limbs = [0u64; 4];
    for (i, chunk) in bytes.rchunks(8).enumerate() {
        let mut buf = [0u8; 8];
        buf[8 - chunk.len()..].copy_from_slice(chunk);
        limbs[i] = u64::from_be_bytes(buf);
    }
    Fq::from_bigint(ark_ff::BigInt::new(limbs)).ok_or_else(|| err("field element out of range"))
}

fn scalar(bytes: &[u8]) -> PyResult<Fr> {
    if bytes.len() != 32 {
        return Err(err("scalar must be 32 bytes"));
    }
    Ok(Fr::from_be_bytes_mod_order(bytes))
}

fn fq_is_largest(y: &Fq) -> bool {
    y.into_bigint() > (-*y).into_bigint()
}

fn fq2_is_largest(y: &Fq2) -> bool {
    let neg = -*y;
    let (a, b) = (y.c1.into_bigint(), neg.c1.into_bigint());
    if a != b {
        return a > b;
    }
    y.c0.into_bigint() > neg.c0.into_bigint()
}

fn split_flags(bytes: &[u8], len: usize) -> PyResult<(u8, Vec<u8>)> {
    if bytes.len() != len {
        return Err(err("bad encoding length"));
    }
    let flags = bytes[0] & FLAG_MASK;
    let mut body = bytes.to_vec();
    body[0] &= !FLAG_MASK;
    if flags == FLAG_LARGEST | FLAG_INFINITY {
        return Err(err("invalid flag combination"));
    }
    if flags == FLAG_INFINITY && body.iter().any(|b| *b != 0) {
        return Err(err("non-canonical point at infinity"));
    }
    Ok((flags, body))
}

#[pyclass(frozen, skip_from_py_object, module = "nicknames._bn254")]
#[derive(Clone)]
struct G1 {
    p: G1Projective,
}

#[pymethods]
impl G1 {
    #[staticmethod]
    fn generator() -> G1 {
        G1 { p: G1Projective::generator() }
    }

    #[staticmethod]
    fn identity() -> G1 {
        G1 { p: G1Projective::zero() }
    }

    #[staticmethod]
    fn from_affine(x: &[u8], y: &[u8]) -> PyResult<G1> {
        let a = G1Affine::new_unchecked(fq_from_be(x)?, fq_from_be(y)?);
        if !a.is_on_curve() {
            return Err(err("point not on curve"));
        }
        Ok(G1 { p: a.into_group() })
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<G1> {
        let (flags, body) = split_flags(data, 32)?;
        if flags == FLAG_INFINITY {
            return Ok(G1::identity());
        }
        let x = fq_from_be(&body)?;
        let rhs = x * x * x + Fq::from(3u64);
        let mut y = rhs.sqrt().ok_or_else(|| err("x is not on the curve"))?;
        if fq_is_largest(&y) != (flags == FLAG_LARGEST) {
            y = -y;
        }
        // cofactor is one: on-curve implies prime-order subgroup
        Ok(G1 { p: G1Affine::new_unchecked(x, y).into_group() })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        let mut out = vec![0u8; 32];
        if self.p.is_zero() {
            out[0] = FLAG_INFINITY;
        } else {
            let a = self.p.into_affine();
            out.copy_from_slice(&fq_to_be(&a.x));
            if fq_is_largest(&a.y) {
                out[0] |= FLAG_LARGEST;
            }
        }
        PyBytes::new(py, &out)
    }

    fn add(&self, other: &G1) -> G1 {
        G1 { p: self.p + other.p }
    }

    fn neg(&self) -> G1 {
        G1 { p: -self.p }
    }

    fn mul(&self, k: &[u8]) -> PyResult<G1> {
        Ok(G1 { p: self.p * scalar(k)? })
    }

    /// Computes `a*x + b*y` (written additively) in one call.
    fn mul2(&self, x: &[u8], other: &G1, y: &[u8]) -> PyResult<G1> {
        Ok(G1 { p: self.p * scalar(x)? + other.p * scalar(y)? })
    }

    fn is_identity(&self) -> bool {
        self.p.is_zero()
    }

    fn equals(&self, other: &G1) -> bool {
        self.p == other.p
    }
}

#[pyclass(frozen, skip_from_py_object, module = "nicknames._bn254")]
#[derive(Clone)]
struct G2 {
    p: G2Projective,
}

#[pymethods]
impl G2 {
    #[staticmethod]
    fn generator() -> G2 {
        G2 { p: G2Projective::generator() }
    }

    #[staticmethod]
    fn identity() -> G2 {
        G2 { p: G2Projective::zero() }
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<G2> {
        let (flags, body) = split_flags(data, 64)?;
        if flags == FLAG_INFINITY {
            return Ok(G2::identity());
        }
        let x = Fq2::new(fq_from_be(&body[32..])?, fq_from_be(&body[..32])?);
        let rhs = x * x * x + ark_bn254::g2::Config::COEFF_B;
        let mut y = rhs.sqrt().ok_or_else(|| err("x is not on the curve"))?;
        if fq2_is_largest(&y) != (flags == FLAG_LARGEST) {
            y = -y;
        }
        let a = G2Affine::new_unchecked(x, y);
        if !a.is_in_correct_subgroup_assuming_on_curve() {
            return Err(err("point not in the prime-order subgroup"));
        }
        Ok(G2 { p: a.into_group() })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        let mut out = vec![0u8; 64];
        if self.p.is_zero() {
            out[0] = FLAG_INFINITY;
        } else {
            let a = self.p.into_affine();
            out[..32].copy_from_slice(&fq_to_be(&a.x.c1));
            out[32..].copy_from_slice(&fq_to_be(&a.x.c0));
            if fq2_is_largest(&a.y) {
                out[0] |= FLAG_LARGEST;
            }
        }
        PyBytes::new(py, &out)
    }

    fn add(&self, other: &G2) -> G2 {
        G2 { p: self.p + other.p }
    }

    fn neg(&self) -> G2 {
        G2 { p: -self.p }
    }

    fn mul(&self, k: &[u8]) -> PyResult<G2> {
        Ok(G2 { p: self.p * scalar(k)? })
    }

    fn mul2(&self, x: &[u8], other: &G2, y: &[u8]) -> PyResult<G2> {
        Ok(G2 { p: self.p * scalar(x)? + other.p * scalar(y)? })
    }

    fn is_identity(&self) -> bool {
        self.p.is_zero()
    }

    fn equals(&self, other: &G2) -> bool {
        self.p == other.p
    }
}

#[pyclass(frozen, skip_from_py_object, module = "nicknames._bn254")]
#[derive(Clone)]
struct Gt {
    f: Fq12,
}

fn fq12_coeffs(f: &Fq12) -> [Fq; 12] {
    let mut out = [Fq::zero(); 12];
    for (i, c6) in [f.c0, f.c1].iter().enumerate() {
        for (j, c2) in [c6.c0, c6.c1, c6.c2].iter().enumerate() {
            out[6 * i + 2 * j] = c2.c0;
            out[6 * i + 2 * j + 1] = c2.c1;
        }
    }
    out
}

#[pymethods]
impl Gt {
    #[staticmethod]
    fn one() -> Gt {
        Gt { f: Fq12::one() }
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Gt> {
        if data.len() != 384 {
            return Err(err("bad encoding length"));
        }
        let mut c = Vec::with_capacity(12);
        for chunk in data.chunks(32) {
            c.push(fq_from_be(chunk)?);
        }
        let fq6 = |o: usize| {
            Fq6::new(
                Fq2::new(c[o], c[o + 1]),
                Fq2::new(c[o + 2], c[o + 3]),
                Fq2::new(c[o + 4], c[o + 5]),
            )
        };
        let f = Fq12::new(fq6(0), fq6(6));
        if f.is_zero() || f.pow(Fr::MODULUS) != Fq12::one() {
            return Err(err("element not in the target group"));
        }
        Ok(Gt { f })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        let mut out = Vec::with_capacity(384);
        for c in fq12_coeffs(&self.f).iter() {
            out.extend_from_slice(&fq_to_be(c));
        }
        PyBytes::new(py, &out)
    }

    fn mul(&self, other: &Gt) -> Gt {
        Gt { f: self.f * other.f }
    }

    fn inv(&self) -> Gt {
        // target group elements are unitary
        let mut f = self.f;
        f.conjugate_in_place();
        Gt { f }
    }

    fn pow(&self, k: &[u8]) -> PyResult<Gt> {
        let out = PairingOutput::<Bn254>(self.f) * scalar(k)?;
        Ok(Gt { f: out.0 })
    }

    fn is_one(&self) -> bool {
        self.f.is_one()
    }

    fn equals(&self, other: &Gt) -> bool {
        self.f == other.f
    }
}

#[pyfunction]
fn pairing(a: &G1, b: &G2) -> Gt {
    Gt { f: Bn254::pairing(a.p, b.p).0 }
}

/// Product of pairings sharing one final exponentiation.
#[pyfunction]
fn multi_pairing(a: Vec<PyRef<G1>>, b: Vec<PyRef<G2>>) -> PyResult<Gt> {
    if a.len() != b.len() {
        return Err(err("length mismatch"));
    }
    let left: Vec<G1Affine> = a.iter().map(|x| x.p.into_affine()).collect();
    let right: Vec<G2Affine> = b.iter().map(|x| x.p.into_affine()).collect();
    Ok(Gt { f: Bn254::multi_pairing(left, right).0 })
}

#[pymodule]
fn _bn254(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<G1>()?;
    m.add_class::<G2>()?;
    m.add_class::<Gt>()?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(multi_pairing, m)?)?;
    m.add("CURVE_ID", "bn254")?;
    Ok(())
}
