//! Canonical forms: expanded multivariate rational normal form over the
//! exact rationals, with transcendental kernels, opaque symbols,
//! antiderivatives and surds treated as fresh indeterminates.
//!
//! `simplify` is the public entry point; it is total and idempotent.
//! Sign symbols obey eps^2 = 1 and 1/eps = eps. A targeted rewrite maps
//! sin(u)^2 to 1 - cos(u)^2 so that sin^2 + cos^2 collapses to 1.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::{int, rat_pow_int, Coord, Expr, Func, Opaque, Param, Rat};

/// Indeterminates of the normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Atom {
    Coord(Coord),
    Param(Param),
    Apply(Func, Expr),
    Opaque(Opaque),
    Antideriv(Expr, Coord, Rat),
    /// base^exponent with a non-integer exponent; base is simplified.
    Surd(Expr, Rat),
}

/// A power product of atoms. Ordered lexicographically with the smallest
/// atom most significant, which is a proper monomial order (compatible
/// with multiplication), as required by the exact division loop.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Monomial(pub BTreeMap<Atom, u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        let mut na = a.next();
        let mut nb = b.next();
        loop {
            match (na, nb) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((ka, ea)), Some((kb, eb))) => match ka.cmp(kb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        na = a.next();
                        nb = b.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .all(|(a, e)| other.0.get(a).map_or(false, |oe| oe >= e))
    }

    /// other / self, assuming divisibility.
    fn quotient_into(&self, other: &Monomial) -> Monomial {
        let mut out = other.0.clone();
        for (a, e) in &self.0 {
            let oe = out.get_mut(a).unwrap();
            *oe -= e;
            if *oe == 0 {
                out.remove(a);
            }
        }
        Monomial(out)
    }
}

/// Expanded polynomial over the atoms with rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Poly(pub BTreeMap<Monomial, Rat>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(BTreeMap::new())
    }

    pub fn one() -> Poly {
        Poly::from_rat(int(1))
    }

    pub fn from_rat(r: Rat) -> Poly {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert(Monomial::unit(), r);
        }
        Poly(m)
    }

    pub fn from_atom(a: Atom) -> Poly {
        let mut mono = BTreeMap::new();
        mono.insert(a, 1u32);
        let mut m = BTreeMap::new();
        m.insert(Monomial(mono), int(1));
        Poly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Some(c) when the polynomial is the constant c (including 0).
    pub fn as_const(&self) -> Option<Rat> {
        if self.0.is_empty() {
            return Some(int(0));
        }
        if self.0.len() == 1 {
            let (m, c) = self.0.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(
            self.0
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * k.clone()))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let part = mono_mul(ma, mb);
                let k = ca.clone() * cb.clone();
                for (m, c) in part.0 {
                    out.insert_term(m, c * k.clone());
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.0.iter().next_back()
    }
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Poly {
    let mut m = a.0.clone();
    for (k, v) in &b.0 {
        *m.entry(k.clone()).or_insert(0) += v;
    }
    normalize_monomial(m)
}

fn bump(map: &mut BTreeMap<Atom, u32>, a: Atom, by: u32) {
    *map.entry(a).or_insert(0) += by;
}

/// Applies the local rewrites (sign symbols, sin^2, surd folding) to a raw
/// power product; the result can be a polynomial.
fn normalize_monomial(m: BTreeMap<Atom, u32>) -> Poly {
    let mut coeff = int(1);
    let mut out: BTreeMap<Atom, u32> = BTreeMap::new();
    let mut pend: Vec<Poly> = Vec::new();
    for (atom, exp) in m {
        if exp == 0 {
            continue;
        }
        match atom {
            Atom::Param(p) if p.sign => {
                if exp % 2 == 1 {
                    bump(&mut out, Atom::Param(p), 1);
                }
            }
            Atom::Apply(Func::Sin, u) if exp >= 2 => {
                let k = exp / 2;
                let cos2 = Poly::from_atom(Atom::Apply(Func::Cos, u.clone())).pow(2);
                pend.push(Poly::one().add(&cos2.neg()).pow(k));
                if exp % 2 == 1 {
                    bump(&mut out, Atom::Apply(Func::Sin, u), 1);
                }
            }
            Atom::Surd(base, r) => {
                let total = r * Rat::from_integer(BigInt::from(exp));
                let n = total.floor().to_integer();
                let frac = total.clone() - Rat::from_integer(n.clone());
                if let Expr::Rational(q) = &base {
                    if !n.is_zero() {
                        coeff *= rat_pow_int(q, &n);
                    }
                    if !frac.is_zero() {
                        if let Some(root) = try_exact_root(q, &frac) {
                            coeff *= root;
                        } else {
                            bump(&mut out, Atom::Surd(base, frac), 1);
                        }
                    }
                } else if n.is_zero() {
                    bump(&mut out, Atom::Surd(base, frac), 1);
                } else if let Some(p) = poly_of_simplified(&base) {
                    pend.push(p.pow(n.to_u32().unwrap_or(0)));
                    if !frac.is_zero() {
                        bump(&mut out, Atom::Surd(base, frac), 1);
                    }
                } else {
                    // Base carries a denominator; keep the accumulated
                    // exponent on the atom itself.
                    bump(&mut out, Atom::Surd(base, total), 1);
                }
            }
            a => bump(&mut out, a, exp),
        }
    }
    let needs_another_pass = out.iter().any(|(a, e)| match a {
        Atom::Param(p) if p.sign => *e > 1,
        Atom::Apply(Func::Sin, _) => *e >= 2,
        Atom::Surd(b, r) => {
            *e > 1 || r >= &int(1) || (matches!(b, Expr::Rational(_)) && try_exact_root_atom(b, r))
        }
        _ => false,
    });
    let base = if needs_another_pass {
        normalize_monomial(out).scale(&coeff)
    } else {
        let mut p = BTreeMap::new();
        p.insert(Monomial(out), coeff);
        Poly(p)
    };
    let mut res = base;
    for p in pend {
        res = res.mul(&p);
    }
    res
}

fn try_exact_root_atom(b: &Expr, r: &Rat) -> bool {
    if let Expr::Rational(q) = b {
        try_exact_root(q, r).is_some()
    } else {
        false
    }
}

/// q^r for rational q and 0 < r < 1, when the result is exactly rational.
fn try_exact_root(q: &Rat, r: &Rat) -> Option<Rat> {
    if q.is_negative() || q.is_zero() {
        return None;
    }
    let p = r.numer().to_u32()?;
    let n = r.denom().to_u32()?;
    if n == 0 || n > 64 {
        return None;
    }
    let rn = q.numer().nth_root(n);
    let rd = q.denom().nth_root(n);
    if rn.clone().pow(n) != *q.numer() || rd.clone().pow(n) != *q.denom() {
        return None;
    }
    let root = Rat::new(rn, rd);
    Some(rat_pow_int(&root, &BigInt::from(p)))
}

fn poly_of_simplified(e: &Expr) -> Option<Poly> {
    match canon(e) {
        Ok(c) if c.den.is_empty() => Some(c.num),
        _ => None,
    }
}

/// Exact polynomial division; returns None when the division is not exact
/// (or does not terminate within the step cap).
pub fn exact_div(num: &Poly, den: &Poly) -> Option<Poly> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(Poly::zero());
    }
    let (lm_d, lc_d) = {
        let (m, c) = den.leading()?;
        (m.clone(), c.clone())
    };
    let mut rem = num.clone();
    let mut quo = Poly::zero();
    let mut last_lead: Option<Monomial> = None;
    for _ in 0..10_000 {
        if rem.is_zero() {
            return Some(quo);
        }
        let (lm_r, lc_r) = {
            let (m, c) = rem.leading().unwrap();
            (m.clone(), c.clone())
        };
        if let Some(prev) = &last_lead {
            if &lm_r >= prev {
                return None;
            }
        }
        if !lm_d.divides(&lm_r) {
            return None;
        }
        let t_mono = lm_d.quotient_into(&lm_r);
        let t_coef = lc_r / lc_d.clone();
        let mut t = Poly::zero();
        t.insert_term(t_mono, t_coef);
        quo = quo.add(&t);
        rem = rem.add(&t.mul(den).neg());
        last_lead = Some(lm_r);
    }
    None
}

/// A rational normal form: expanded numerator over a product of normalized
/// denominator factors (each with integer coprime coefficients and a
/// positive leading coefficient).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Canon {
    pub num: Poly,
    pub den: BTreeMap<Poly, u32>,
}

/// Symbolic division by an expression that is identically zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DivByZero;

impl Canon {
    pub fn from_poly(p: Poly) -> Canon {
        Canon {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn from_rat(r: Rat) -> Canon {
        Canon::from_poly(Poly::from_rat(r))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduced(mut self) -> Canon {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let factors: Vec<Poly> = self.den.keys().cloned().collect();
        for f in factors {
            let mut mult = self.den.remove(&f).unwrap_or(0);
            while mult > 0 {
                match exact_div(&self.num, &f) {
                    Some(q) => {
                        self.num = q;
                        mult -= 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                self.den.insert(f, mult);
            }
        }
        self
    }

    pub fn mul(&self, other: &Canon) -> Canon {
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        Canon {
            num: self.num.mul(&other.num),
            den,
        }
        .reduced()
    }

    pub fn add(&self, other: &Canon) -> Canon {
        let mut den: BTreeMap<Poly, u32> = self.den.clone();
        for (f, m) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |num: &Poly, own: &BTreeMap<Poly, u32>| {
            let mut n = num.clone();
            for (f, m) in &den {
                let have = own.get(f).copied().unwrap_or(0);
                if *m > have {
                    n = n.mul(&f.pow(m - have));
                }
            }
            n
        };
        let na = lift(&self.num, &self.den);
        let nb = lift(&other.num, &other.den);
        Canon {
            num: na.add(&nb),
            den,
        }
        .reduced()
    }

    pub fn neg(&self) -> Canon {
        Canon {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Canon, DivByZero> {
        if self.num.is_zero() {
            return Err(DivByZero);
        }
        let mut num = Poly::one();
        for (f, m) in &self.den {
            num = num.mul(&f.pow(*m));
        }
        let (scale, eps, factors) = factorize_den(&self.num);
        let mut n = num.scale(&scale.recip());
        if let Some(a) = eps {
            n = n.mul(&Poly::from_atom(a));
        }
        let mut den: BTreeMap<Poly, u32> = BTreeMap::new();
        for (f, m) in factors {
            *den.entry(f).or_insert(0) += m;
        }
        Ok(Canon { num: n, den }.reduced())
    }

    pub fn pow_int(&self, n: i64) -> Result<Canon, DivByZero> {
        if n == 0 {
            return Ok(Canon::from_rat(int(1)));
        }
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut acc = Canon::from_rat(int(1));
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn to_expr(&self) -> Expr {
        let n = poly_to_expr(&self.num);
        if self.den.is_empty() {
            return n;
        }
        let mut factors = alloc::vec![n];
        for (f, m) in &self.den {
            factors.push(Expr::pow(poly_to_expr(f), int(-(*m as i64))));
        }
        Expr::mul_many(factors)
    }
}

/// Writes p as scale * eps? * product(factors): scalar content and sign
/// pulled out, a global sign-symbol factor moved to the numerator side
/// (1/eps = eps), a common power product split into single-atom factors,
/// and whatever polynomial remains kept as one factor.
fn factorize_den(p: &Poly) -> (Rat, Option<Atom>, Vec<(Poly, u32)>) {
    debug_assert!(!p.is_zero());
    // Scalar content with the sign of the leading coefficient.
    let mut num_gcd = BigInt::from(0);
    let mut den_lcm = BigInt::from(1);
    for c in p.0.values() {
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut scale = Rat::new(num_gcd, den_lcm);
    if p.leading().map_or(false, |(_, c)| c.is_negative()) {
        scale = -scale;
    }
    let inv = scale.recip();
    let mut q = p.scale(&inv);

    // A sign symbol present in every monomial is a unit: pull it out whole.
    let mut eps: Option<Atom> = None;
    let sign_atoms: Vec<Atom> = q
        .0
        .keys()
        .flat_map(|m| m.0.keys())
        .filter(|a| matches!(a, Atom::Param(p) if p.sign))
        .cloned()
        .collect();
    for a in sign_atoms {
        if q.0.keys().all(|m| m.0.contains_key(&a)) {
            let stripped: BTreeMap<Monomial, Rat> = q
                .0
                .iter()
                .map(|(m, c)| {
                    let mut mm = m.0.clone();
                    mm.remove(&a);
                    (Monomial(mm), c.clone())
                })
                .collect();
            q = Poly(stripped);
            eps = Some(a);
            break;
        }
    }

    let mut factors: Vec<(Poly, u32)> = Vec::new();
    // Common atom powers across all monomials.
    let common: Vec<(Atom, u32)> = {
        let mut it = q.0.keys();
        let first = it.next().map(|m| m.0.clone()).unwrap_or_default();
        first
            .into_iter()
            .filter_map(|(a, mut e)| {
                for m in q.0.keys() {
                    match m.0.get(&a) {
                        Some(oe) => e = e.min(*oe),
                        None => return None,
                    }
                }
                Some((a, e))
            })
            .collect()
    };
    if !common.is_empty() {
        let stripped: BTreeMap<Monomial, Rat> = q
            .0
            .iter()
            .map(|(m, c)| {
                let mut mm = m.0.clone();
                for (a, e) in &common {
                    let oe = mm.get_mut(a).unwrap();
                    *oe -= e;
                    if *oe == 0 {
                        mm.remove(a);
                    }
                }
                (Monomial(mm), c.clone())
            })
            .collect();
        q = Poly(stripped);
        for (a, e) in common {
            factors.push((Poly::from_atom(a), e));
        }
    }
    match q.as_const() {
        Some(c) => {
            scale *= c;
        }
        None => {
            if q.0.len() == 1 {
                // A single non-constant monomial splits into atom factors.
                let (m, c) = q.0.iter().next().unwrap();
                scale *= c.clone();
                for (a, e) in &m.0 {
                    factors.push((Poly::from_atom(a.clone()), *e));
                }
            } else {
                factors.push((q, 1));
            }
        }
    }
    (scale, eps, factors)
}

fn atom_to_expr(a: &Atom) -> Expr {
    match a {
        Atom::Coord(c) => Expr::Coordinate(*c),
        Atom::Param(p) => Expr::Param(p.clone()),
        Atom::Apply(f, arg) => Expr::Apply(*f, alloc::boxed::Box::new(arg.clone())),
        Atom::Opaque(o) => Expr::Opaque(o.clone()),
        Atom::Antideriv(g, v, lb) => Expr::Antideriv(alloc::boxed::Box::new(g.clone()), *v, lb.clone()),
        Atom::Surd(b, r) => Expr::Power(alloc::boxed::Box::new(b.clone()), r.clone()),
    }
}

fn poly_to_expr(p: &Poly) -> Expr {
    if p.is_zero() {
        return Expr::num(0);
    }
    let mut terms: Vec<Expr> = Vec::new();
    for (m, c) in p.0.iter().rev() {
        let mut factors: Vec<Expr> = alloc::vec![Expr::Rational(c.clone())];
        for (a, e) in &m.0 {
            factors.push(Expr::powi(atom_to_expr(a), *e as i64));
        }
        terms.push(Expr::mul_many(factors));
    }
    Expr::add_many(terms)
}

pub fn canon(e: &Expr) -> Result<Canon, DivByZero> {
    match e {
        Expr::Rational(r) => Ok(Canon::from_rat(r.clone())),
        Expr::Coordinate(c) => Ok(Canon::from_poly(Poly::from_atom(Atom::Coord(*c)))),
        Expr::Param(p) => Ok(Canon::from_poly(Poly::from_atom(Atom::Param(p.clone())))),
        Expr::Sum(terms) => {
            let mut acc = Canon::from_rat(int(0));
            for t in terms {
                acc = acc.add(&canon(t)?);
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = Canon::from_rat(int(1));
            for f in fs {
                acc = acc.mul(&canon(f)?);
            }
            Ok(acc)
        }
        Expr::Power(base, exp) => {
            let c = canon(base)?;
            let ipart = exp.floor().to_integer();
            let frac = exp.clone() - Rat::from_integer(ipart.clone());
            let mut acc = c.pow_int(ipart.to_i64().ok_or(DivByZero)?)?;
            if !frac.is_zero() {
                let surd = match &c.num.as_const() {
                    Some(q) if c.den.is_empty() => {
                        if q.is_zero() {
                            Canon::from_rat(int(0))
                        } else {
                            match try_exact_root(q, &frac) {
                                Some(r) => Canon::from_rat(r),
                                None => Canon::from_poly(Poly::from_atom(Atom::Surd(
                                    Expr::Rational(q.clone()),
                                    frac,
                                ))),
                            }
                        }
                    }
                    _ => Canon::from_poly(Poly::from_atom(Atom::Surd(c.to_expr(), frac))),
                };
                acc = acc.mul(&surd);
            }
            Ok(acc)
        }
        Expr::Apply(f, arg) => {
            let a = canon(arg)?.to_expr();
            if let Expr::Rational(r) = &a {
                match f {
                    Func::Exp if r.is_zero() => return Ok(Canon::from_rat(int(1))),
                    Func::Log if r.is_one() => return Ok(Canon::from_rat(int(0))),
                    Func::Sin if r.is_zero() => return Ok(Canon::from_rat(int(0))),
                    Func::Cos if r.is_zero() => return Ok(Canon::from_rat(int(1))),
                    _ => {}
                }
            }
            Ok(Canon::from_poly(Poly::from_atom(Atom::Apply(*f, a))))
        }
        Expr::Opaque(o) => Ok(Canon::from_poly(Poly::from_atom(Atom::Opaque(o.clone())))),
        Expr::Antideriv(g, v, lb) => {
            let gs = simplify(g);
            if gs.is_zero() {
                return Ok(Canon::from_rat(int(0)));
            }
            Ok(Canon::from_poly(Poly::from_atom(Atom::Antideriv(
                gs,
                *v,
                lb.clone(),
            ))))
        }
    }
}

/// Canonical simplification. Total: an expression containing a division by
/// a symbolically zero quantity is returned unchanged (evaluation will
/// report the domain error instead).
pub fn simplify(e: &Expr) -> Expr {
    match canon(e) {
        Ok(c) => c.to_expr(),
        Err(DivByZero) => e.clone(),
    }
}

/// True when the expression simplifies to the zero polynomial.
pub fn is_zero_sym(e: &Expr) -> bool {
    matches!(canon(e), Ok(c) if c.is_zero())
}
