//! Curvature and first-order differential operators for the metric
//! g = 2 dx dz + eps dy^2 + f(x,y,z) dz^2 on coordinates (x, y, z).
//!
//! Everything is computed by generic index loops from the component
//! matrix; no component formula is special-cased. The closed forms for
//! this metric live in the test module as cross-checks.

use alloc::vec::Vec;

use crate::canon::simplify;
use crate::diff::diff;
use crate::expr::{Coord, Expr};

pub type Mat = [[Expr; 3]; 3];
pub type Vec3 = [Expr; 3];

#[derive(Clone, Debug)]
pub struct Metric {
    pub eps: Expr,
    pub f: Expr,
}

fn zero_mat() -> Mat {
    core::array::from_fn(|_| core::array::from_fn(|_| Expr::num(0)))
}

fn d(e: &Expr, i: usize) -> Expr {
    diff(e, Coord::from_index(i))
}

impl Metric {
    pub fn new(eps: Expr, f: Expr) -> Metric {
        Metric { eps, f }
    }

    /// Covariant components g_ij.
    pub fn components(&self) -> Mat {
        let mut g = zero_mat();
        g[0][2] = Expr::num(1);
        g[2][0] = Expr::num(1);
        g[1][1] = self.eps.clone();
        g[2][2] = self.f.clone();
        g
    }

    pub fn det(&self) -> Expr {
        simplify(&det3(&self.components()))
    }

    /// Contravariant components g^ij, by the adjugate.
    pub fn inverse(&self) -> Mat {
        let g = self.components();
        let det = det3(&g);
        let mut inv = zero_mat();
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let c = cofactor(&g, j, i);
                *e = simplify(&Expr::div(c, det.clone()));
            }
        }
        inv
    }

    /// Christoffel symbols of the second kind; result[k][i][j] = Gamma^k_ij.
    pub fn christoffel(&self) -> [Mat; 3] {
        let g = self.components();
        let inv = self.inverse();
        let mut dg = Vec::with_capacity(3);
        for k in 0..3 {
            let mut m = zero_mat();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = d(&g[i][j], k);
                }
            }
            dg.push(m);
        }
        core::array::from_fn(|k| {
            let mut m = zero_mat();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    let mut terms = Vec::new();
                    for l in 0..3 {
                        let sym = Expr::add_many(alloc::vec![
                            dg[i][j][l].clone(),
                            dg[j][i][l].clone(),
                            Expr::neg(dg[l][i][j].clone()),
                        ]);
                        terms.push(Expr::mul(inv[k][l].clone(), sym));
                    }
                    *e = simplify(&Expr::mul(Expr::ratio(1, 2), Expr::add_many(terms)));
                }
            }
            m
        })
    }

    /// Ricci tensor Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj
    ///                      + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj.
    pub fn ricci(&self) -> Mat {
        let gam = self.christoffel();
        let mut ric = zero_mat();
        for (i, row) in ric.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut terms = Vec::new();
                for k in 0..3 {
                    terms.push(d(&gam[k][i][j], k));
                    terms.push(Expr::neg(d(&gam[k][k][j], i)));
                    for l in 0..3 {
                        terms.push(Expr::mul(gam[k][k][l].clone(), gam[l][i][j].clone()));
                        terms.push(Expr::neg(Expr::mul(
                            gam[k][i][l].clone(),
                            gam[l][k][j].clone(),
                        )));
                    }
                }
                *e = simplify(&Expr::add_many(terms));
            }
        }
        ric
    }

    /// Scalar curvature g^ij Ric_ij.
    pub fn scalar_curvature(&self) -> Expr {
        let inv = self.inverse();
        let ric = self.ricci();
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                terms.push(Expr::mul(inv[i][j].clone(), ric[i][j].clone()));
            }
        }
        simplify(&Expr::add_many(terms))
    }

    /// Hessian (nabla^2 F)_ij = d_i d_j F - Gamma^k_ij d_k F.
    pub fn hessian(&self, big_f: &Expr) -> Mat {
        let gam = self.christoffel();
        let grad: Vec<Expr> = (0..3).map(|k| d(big_f, k)).collect();
        let mut h = zero_mat();
        for (i, row) in h.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut terms = alloc::vec![d(&grad[i], j)];
                for k in 0..3 {
                    terms.push(Expr::neg(Expr::mul(gam[k][i][j].clone(), grad[k].clone())));
                }
                *e = simplify(&Expr::add_many(terms));
            }
        }
        h
    }

    /// Laplace-Beltrami operator g^ij (nabla^2 F)_ij.
    pub fn laplacian(&self, big_f: &Expr) -> Expr {
        let inv = self.inverse();
        let h = self.hessian(big_f);
        let mut terms = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                terms.push(Expr::mul(inv[i][j].clone(), h[i][j].clone()));
            }
        }
        simplify(&Expr::add_many(terms))
    }

    /// Contravariant gradient (grad F)^i = g^ij d_j F.
    pub fn gradient(&self, big_f: &Expr) -> Vec3 {
        let inv = self.inverse();
        core::array::from_fn(|i| {
            let mut terms = Vec::new();
            for j in 0..3 {
                terms.push(Expr::mul(inv[i][j].clone(), d(big_f, j)));
            }
            simplify(&Expr::add_many(terms))
        })
    }

    /// Lie derivative of the metric along the (contravariant) field V:
    /// (L_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k.
    pub fn lie_metric(&self, v: &Vec3) -> Mat {
        let g = self.components();
        let mut out = zero_mat();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut terms = Vec::new();
                for k in 0..3 {
                    terms.push(Expr::mul(v[k].clone(), d(&g[i][j], k)));
                    terms.push(Expr::mul(g[k][j].clone(), d(&v[k], i)));
                    terms.push(Expr::mul(g[i][k].clone(), d(&v[k], j)));
                }
                *e = simplify(&Expr::add_many(terms));
            }
        }
        out
    }

    /// Divergence of a contravariant field: d_i V^i + Gamma^i_ik V^k.
    pub fn divergence(&self, v: &Vec3) -> Expr {
        let gam = self.christoffel();
        let mut terms = Vec::new();
        for i in 0..3 {
            terms.push(d(&v[i], i));
            for k in 0..3 {
                terms.push(Expr::mul(gam[i][i][k].clone(), v[k].clone()));
            }
        }
        simplify(&Expr::add_many(terms))
    }

    /// Covariant derivative of the metric, nabla_k g_ij; identically zero,
    /// kept as a self-check for the Christoffel computation.
    pub fn metric_compatibility(&self) -> [Mat; 3] {
        let g = self.components();
        let gam = self.christoffel();
        core::array::from_fn(|k| {
            let mut m = zero_mat();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    let mut terms = alloc::vec![d(&g[i][j], k)];
                    for l in 0..3 {
                        terms.push(Expr::neg(Expr::mul(gam[l][k][i].clone(), g[l][j].clone())));
                        terms.push(Expr::neg(Expr::mul(gam[l][k][j].clone(), g[i][l].clone())));
                    }
                    *e = simplify(&Expr::add_many(terms));
                }
            }
            m
        })
    }

    /// Lowers an index: (V^flat)_i = g_ij V^j.
    pub fn lower(&self, v: &Vec3) -> Vec3 {
        let g = self.components();
        core::array::from_fn(|i| {
            let mut terms = Vec::new();
            for j in 0..3 {
                terms.push(Expr::mul(g[i][j].clone(), v[j].clone()));
            }
            simplify(&Expr::add_many(terms))
        })
    }
}

fn det3(g: &Mat) -> Expr {
    let mut terms = Vec::new();
    for (j, sgn) in [(0usize, 1i64), (1, -1), (2, 1)] {
        let (c0, c1) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = Expr::sub(
            Expr::mul(g[1][c0].clone(), g[2][c1].clone()),
            Expr::mul(g[1][c1].clone(), g[2][c0].clone()),
        );
        terms.push(Expr::mul_many(alloc::vec![
            Expr::num(sgn),
            g[0][j].clone(),
            minor,
        ]));
    }
    Expr::add_many(terms)
}

fn cofactor(g: &Mat, i: usize, j: usize) -> Expr {
    let rows: Vec<usize> = (0..3).filter(|r| *r != i).collect();
    let cols: Vec<usize> = (0..3).filter(|c| *c != j).collect();
    let minor = Expr::sub(
        Expr::mul(g[rows[0]][cols[0]].clone(), g[rows[1]][cols[1]].clone()),
        Expr::mul(g[rows[0]][cols[1]].clone(), g[rows[1]][cols[0]].clone()),
    );
    let sgn = if (i + j) % 2 == 0 { 1 } else { -1 };
    Expr::mul(Expr::num(sgn), minor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_zero_sym;
    use crate::expr::Coord;

    fn sym_metric() -> Metric {
        Metric::new(
            Expr::sign("eps"),
            Expr::opaque("f", &[Coord::X, Coord::Y, Coord::Z]),
        )
    }

    fn assert_mat(actual: &Mat, expected: &[(usize, usize, &str)]) {
        let mut want = zero_mat();
        for (i, j, s) in expected {
            want[*i][*j] = crate::parse::parse(s).unwrap();
            if i != j {
                want[*j][*i] = want[*i][*j].clone();
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let delta = Expr::sub(actual[i][j].clone(), want[i][j].clone());
                assert!(
                    is_zero_sym(&delta),
                    "component ({},{}) mismatch: got {}, want {}",
                    i + 1,
                    j + 1,
                    actual[i][j],
                    want[i][j]
                );
            }
        }
    }

    #[test]
    fn inverse_closed_form() {
        let m = sym_metric();
        assert!(is_zero_sym(&Expr::add(m.det(), Expr::sign("eps"))));
        let inv = m.inverse();
        assert_mat(
            &inv,
            &[
                (0, 0, "-f(x,y,z)"),
                (0, 2, "1"),
                (1, 1, "eps"),
            ],
        );
    }

    #[test]
    fn christoffel_closed_form() {
        let m = sym_metric();
        let gam = m.christoffel();
        assert_mat(
            &gam[0],
            &[
                (0, 2, "1/2 D(f(x,y,z), x)"),
                (1, 2, "1/2 D(f(x,y,z), y)"),
                (2, 2, "1/2 (f(x,y,z) D(f(x,y,z), x) + D(f(x,y,z), z))"),
            ],
        );
        assert_mat(&gam[1], &[(2, 2, "-D(f(x,y,z), y) / (2 eps)")]);
        assert_mat(&gam[2], &[(2, 2, "-1/2 D(f(x,y,z), x)")]);
    }

    #[test]
    fn christoffel_first_lower_index_x_vanishes_except_top() {
        // Gamma^k_j1 = 0 for k != 1 in index notation (here: derivative
        // along x only feeds the first component).
        let m = sym_metric();
        let gam = m.christoffel();
        for k in 1..3 {
            for j in 0..3 {
                assert!(is_zero_sym(&gam[k][0][j]), "gamma[{k}][0][{j}] nonzero");
            }
        }
    }

    #[test]
    fn ricci_and_scalar_closed_form() {
        let m = sym_metric();
        let ric = m.ricci();
        assert_mat(
            &ric,
            &[
                (0, 2, "1/2 D(f(x,y,z), x, 2)"),
                (1, 2, "1/2 D(D(f(x,y,z), x), y)"),
                (
                    2,
                    2,
                    "(eps f(x,y,z) D(f(x,y,z), x, 2) - D(f(x,y,z), y, 2)) / (2 eps)",
                ),
            ],
        );
        let want = crate::parse::parse("D(f(x,y,z), x, 2)").unwrap();
        assert!(is_zero_sym(&Expr::sub(m.scalar_curvature(), want)));
    }

    #[test]
    fn metric_compatibility_vanishes() {
        let m = sym_metric();
        for mat in m.metric_compatibility() {
            for row in &mat {
                for e in row {
                    assert!(is_zero_sym(e));
                }
            }
        }
    }

    #[test]
    fn laplacian_gradient_closed_form() {
        let m = sym_metric();
        let ff = Expr::opaque("u", &[Coord::X, Coord::Y, Coord::Z]);
        let lap = m.laplacian(&ff);
        let want = crate::parse::parse(
            "-f(x,y,z) D(u(x,y,z), x, 2) - D(f(x,y,z), x) D(u(x,y,z), x) \
             + eps D(u(x,y,z), y, 2) + 2 D(D(u(x,y,z), x), z)",
        )
        .unwrap();
        assert!(is_zero_sym(&Expr::sub(lap, want)), "laplacian mismatch");
        let grad = m.gradient(&ff);
        let want_g = [
            "-f(x,y,z) D(u(x,y,z), x) + D(u(x,y,z), z)",
            "eps D(u(x,y,z), y)",
            "D(u(x,y,z), x)",
        ];
        for (g, w) in grad.iter().zip(want_g) {
            let w = crate::parse::parse(w).unwrap();
            assert!(is_zero_sym(&Expr::sub(g.clone(), w)), "gradient mismatch");
        }
    }

    #[test]
    fn hessian_trace_is_laplacian() {
        let m = sym_metric();
        let ff = Expr::opaque("u", &[Coord::X, Coord::Y, Coord::Z]);
        let inv = m.inverse();
        let h = m.hessian(&ff);
        let mut terms = alloc::vec::Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                terms.push(Expr::mul(inv[i][j].clone(), h[i][j].clone()));
            }
        }
        let tr = Expr::add_many(terms);
        assert!(is_zero_sym(&Expr::sub(tr, m.laplacian(&ff))));
    }

    #[test]
    fn lie_along_gradient_is_twice_hessian() {
        let m = sym_metric();
        let ff = Expr::opaque("u", &[Coord::X, Coord::Y, Coord::Z]);
        let lie = m.lie_metric(&m.gradient(&ff));
        let h = m.hessian(&ff);
        for i in 0..3 {
            for j in 0..3 {
                let delta = Expr::sub(
                    lie[i][j].clone(),
                    Expr::mul(Expr::num(2), h[i][j].clone()),
                );
                assert!(is_zero_sym(&delta), "mismatch at ({i},{j})");
            }
        }
    }

    #[test]
    fn lie_metric_closed_form() {
        let m = sym_metric();
        let v: Vec3 = [
            Expr::opaque("p", &[Coord::X, Coord::Y, Coord::Z]),
            Expr::opaque("q", &[Coord::X, Coord::Y, Coord::Z]),
            Expr::opaque("r", &[Coord::X, Coord::Y, Coord::Z]),
        ];
        let lie = m.lie_metric(&v);
        let f = "f(x,y,z)";
        let cases = [
            (0usize, 0usize, alloc::format!("2 D(r(x,y,z), x)")),
            (0, 1, alloc::format!("eps D(q(x,y,z), x) + D(r(x,y,z), y)")),
            (
                0,
                2,
                alloc::format!("D(p(x,y,z), x) + D(r(x,y,z), z) + {f} D(r(x,y,z), x)"),
            ),
            (1, 1, alloc::format!("2 eps D(q(x,y,z), y)")),
            (
                1,
                2,
                alloc::format!("D(p(x,y,z), y) + {f} D(r(x,y,z), y) + eps D(q(x,y,z), z)"),
            ),
            (
                2,
                2,
                alloc::format!(
                    "p(x,y,z) D({f}, x) + q(x,y,z) D({f}, y) + r(x,y,z) D({f}, z) \
                     + 2 D(p(x,y,z), z) + 2 {f} D(r(x,y,z), z)"
                ),
            ),
        ];
        for (i, j, s) in cases {
            let w = crate::parse::parse(&s).unwrap();
            let delta = Expr::sub(lie[i][j].clone(), w);
            assert!(is_zero_sym(&delta), "lie ({i},{j}) mismatch: {}", lie[i][j]);
        }
    }
}
