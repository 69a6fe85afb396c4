//! Assembly of the residue bound: log forms, κ at each selected fiber, the
//! Eisenstein image over `F_p`, Galois intersection and exclusion tests.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::cartier::hasse_coefficient;
use super::local::required_degree;
use super::{
    check_prime, condition_checks, differential_ratio, family_catalog, kappa, logform_basis, tate_period,
    Conditions, FamilyName, FiberLocation, LogForm,
};
use crate::eis::{cp2_check, eis_image, intersect_galois, lambert_decompose, Cp2Verdict, EisForm, FpSubspace, TeichBasis};
use crate::error::{Error, Result};
use crate::padic::make_ring;
use crate::qexp::{gamma13_series, Gamma13};
use crate::series::LaurentSeries;

/// Parses a comma-separated fiber list: `roots` (every `t^k = 1` fiber),
/// `z<i>` (`t = ζ_k^i`), `1`, `-1` and `0`.
pub fn parse_fibers(spec: &str, k: u32) -> Result<Vec<FiberLocation>> {
    let mut out = vec![];
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok {
            "roots" => out.extend((1..=k).map(|i| FiberLocation::Root { i })),
            "0" => out.push(FiberLocation::Zero),
            "1" => out.push(FiberLocation::Root { i: k }),
            "-1" if k.is_multiple_of(2) => out.push(FiberLocation::Root { i: k / 2 }),
            _ => {
                let i = tok
                    .strip_prefix('z')
                    .and_then(|s| s.parse::<u32>().ok())
                    .filter(|&i| (1..=k).contains(&i))
                    .ok_or_else(|| Error::Usage(format!("bad fiber token {tok:?} for k = {k}")))?;
                out.push(FiberLocation::Root { i });
            }
        }
    }
    Ok(out)
}

/// Inputs of [`bound_report`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundRequest {
    pub family: FamilyName,
    pub k: u32,
    pub p: u64,
    /// Largest index `j` constrained by (E2).
    pub n: i64,
    pub fibers: Vec<FiberLocation>,
    /// Multipliers `a ∈ (Z/k)^×` for the conjugate embeddings `ζ ↦ ζ^a`.
    pub embeddings: Vec<u32>,
    /// Residue vectors to test for exclusion.
    pub exclusions: Vec<Vec<i64>>,
    /// Certified `p`-adic digits.
    pub precision: u32,
    /// Extra digits carried through the computation.
    pub guard: u32,
}

/// One exclusion test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub vector: Vec<i64>,
    pub excluded: bool,
}

/// The assembled bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub family: FamilyName,
    pub k: u32,
    pub p: u64,
    pub n: i64,
    pub fibers: Vec<FiberLocation>,
    pub residue_degree: usize,
    pub forms: Vec<LogForm>,
    pub conditions: Conditions,
    /// (A′) and (B′) hold, so the bound applies.
    pub bound_valid: bool,
    pub eis_image_basis: Vec<Vec<i64>>,
    pub bound: usize,
    pub intersected_bound: Option<usize>,
    pub intersected_basis: Option<Vec<Vec<i64>>>,
    pub excluded: Vec<Exclusion>,
    pub certified_precision: u32,
}

/// κ of every form at one fiber, with the fiber's residue sign checked.
fn fiber_kappas(
    req: &BoundRequest,
    fam: &super::WeierstrassFamily,
    ring: &crate::padic::Ring,
    idx: usize,
    forms: &[(LogForm, Vec<u64>)],
) -> Result<Vec<LaurentSeries>> {
    let loc = req.fibers[idx];
    let mut fib = tate_period(fam, loc, ring, req.n + 2)?;
    differential_ratio(fam, &mut fib)?;
    let mut sign = None;
    let mut out = vec![];
    for (form, res) in forms {
        let kap = kappa(fam, &fib, *form)?;
        if kap.normalize().first_nonzero().is_some_and(|v| v < 0) {
            return Err(Error::SelfCheck(format!("κ({form:?}) has a pole at {loc}")));
        }
        // b₀ must be ±(rational residue) with one sign per fiber.
        let b0 = kap.coeff(0);
        let r = ring.from_u64(res[idx]);
        let s = if b0 == r { 1 } else if b0 == r.neg() { -1 } else { 0 };
        let ok = s != 0 && (res[idx] == 0 || sign.is_none_or(|x| x == s));
        if !ok {
            return Err(Error::SelfCheck(format!("constant term of κ({form:?}) at {loc} is not ±its residue")));
        }
        if res[idx] != 0 {
            sign = Some(s);
        }
        out.push(kap);
    }
    Ok(out)
}

/// Runs the full pipeline for one `(family, k, p, n, fibers)`.
pub fn bound_report(req: &BoundRequest) -> Result<BoundReport> {
    let fam = family_catalog(req.family, req.k)?;
    check_prime(req.p, fam.k)?;
    let conditions = condition_checks(&fam, req.p)?;
    let d = required_degree(&fam, &req.fibers, req.p)?;
    let digits = req.precision + req.guard;
    let ring = make_ring(req.p, d, digits)?;
    let forms = logform_basis(&fam, &req.fibers)?;
    let (fam_ref, ring_ref, forms_ref) = (&fam, &ring, &forms);
    let per_fiber: Vec<Result<Vec<LaurentSeries>>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            (0..req.fibers.len()).map(|i| s.spawn(move || fiber_kappas(req, fam_ref, ring_ref, i, forms_ref))).collect();
        handles.into_iter().map(|h| h.join().expect("fiber worker panicked")).collect()
    });
    let per_fiber = per_fiber.into_iter().collect::<Result<Vec<_>>>()?;
    let basis = TeichBasis::new(&ring, 0)?;
    let nfib = req.fibers.len();
    let ambient = nfib * d;
    // Forms over R are flattened against the ζ-basis into Z_p-forms; residue
    // coordinates are laid out fiber-major.
    let mut flat = vec![];
    for (a, (_, res)) in forms.iter().enumerate() {
        for (c, beta) in basis.elems().iter().enumerate() {
            let fibers = per_fiber
                .iter()
                .map(|ks| lambert_decompose(&ks[a].scale(beta), &basis))
                .collect::<Result<Vec<_>>>()?;
            let mut residue = vec![0u64; ambient];
            for (f, &r) in res.iter().enumerate() {
                residue[f * d + c] = r % req.p;
            }
            flat.push(EisForm { fibers, residue });
        }
    }
    let image = eis_image(&flat, req.p, req.n)?;
    let span = image.span;
    let (intersected_bound, intersected_basis) = if req.embeddings.is_empty() {
        (None, None)
    } else {
        let perms = req
            .embeddings
            .iter()
            .map(|&a| galois_permutation(&req.fibers, a, fam.k, d))
            .collect::<Result<Vec<_>>>()?;
        let inter = intersect_galois(&span, &perms)?;
        (Some(inter.dim()), Some(inter.signed_rows()))
    };
    let excluded = req
        .exclusions
        .iter()
        .map(|v| {
            if v.len() != nfib {
                return Err(Error::Usage(format!("exclusion vector needs {nfib} entries")));
            }
            let mut w = vec![0u64; ambient];
            for (f, &x) in v.iter().enumerate() {
                w[f * d] = x.rem_euclid(req.p as i64) as u64;
            }
            Ok(Exclusion { vector: v.clone(), excluded: !span.contains(&w) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        family: req.family,
        k: fam.k,
        p: req.p,
        n: req.n,
        fibers: req.fibers.clone(),
        residue_degree: d,
        forms: forms.iter().map(|f| f.0).collect(),
        bound_valid: conditions.a_prime && conditions.b_prime,
        conditions,
        eis_image_basis: span.signed_rows(),
        bound: span.dim(),
        intersected_bound,
        intersected_basis,
        excluded,
        certified_precision: req.precision,
    })
}

/// The coordinate permutation induced by `ζ ↦ ζ^a` on the selected fibers.
fn galois_permutation(fibers: &[FiberLocation], a: u32, k: u32, d: usize) -> Result<Vec<usize>> {
    if num_integer::gcd(a, k) != 1 {
        return Err(Error::Usage(format!("embedding multiplier {a} is not a unit mod {k}")));
    }
    let mut perm = vec![0; fibers.len() * d];
    for (f, loc) in fibers.iter().enumerate() {
        let image = match *loc {
            FiberLocation::Root { i } => FiberLocation::Root { i: ((a as u64 * i as u64 - 1) % k as u64 + 1) as u32 },
            other => other,
        };
        let g = fibers
            .iter()
            .position(|x| *x == image)
            .ok_or_else(|| Error::Usage(format!("fiber selection is not closed under ζ ↦ ζ^{a}")))?;
        for c in 0..d {
            perm[f * d + c] = g * d + c;
        }
    }
    Ok(perm)
}

/// Verdict of the condition C(p) for the `k3` family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CpVerdict {
    pub p: u64,
    pub k_p: String,
    /// `k_p ≢ 1 mod p`.
    pub cp1: bool,
    pub cp2: Cp2Verdict,
    pub holds: bool,
    pub precision: u32,
}

/// C(p)-1 from the Hasse coefficient and C(p)-2 from the Lambert
/// coefficients of `f₁`, `f₂`, `g` modulo `p^precision` to `q^{p²}`.
pub fn check_cp(p: u64, precision: u32) -> Result<CpVerdict> {
    let fam = family_catalog(FamilyName::K3, 4)?;
    check_prime(p, 4)?;
    let k_p: BigInt = hasse_coefficient(&fam, p);
    let pb = BigInt::from(p);
    let cp1 = ((&k_p % &pb + &pb) % &pb).to_u64() != Some(1);
    let ring = make_ring(p, 1, precision)?;
    let basis = TeichBasis::new(&ring, 0)?;
    let order = (p * p + 1) as i64;
    let dec = |name| -> Result<_> { lambert_decompose(&gamma13_series(&ring, name, order)?, &basis) };
    let cp2 = cp2_check(&dec(Gamma13::F1)?, &dec(Gamma13::F2)?, &dec(Gamma13::G)?, p)?;
    Ok(CpVerdict { p, k_p: k_p.to_string(), cp1, holds: cp1 && cp2.holds, cp2, precision })
}

/// The image span alone, for callers that only need the subspace.
pub fn image_span(report: &BoundReport) -> Result<FpSubspace> {
    FpSubspace::span_signed(report.p, report.fibers.len() * report.residue_degree, &report.eis_image_basis)
}
