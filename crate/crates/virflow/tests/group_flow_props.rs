//! Group-level invariants: flow reconstruction round-trips, adjoint-action
//! isometry under rotations, horizontality along reconstructed flows, the
//! central lift cross-check, and the extended group axioms.

use num_complex::Complex64;
use proptest::prelude::*;
use virflow::euler_arnold::{
    integrate, GeodesicState, IntegratorConfig, Lambda, ModelKind, Scheme,
};
use virflow::fourier::{inner_product, k_n, p_n, CocycleParams, FourierField, InnerKind};
use virflow::group_flow::{
    central_lift, central_lift_integrand, flow_from_log, group_cocycle_a, group_cocycle_b,
    log_derivative, vir_inverse, vir_multiply, DiffeoGrid, FlowConfig, VirasoroElement,
};
use virflow::quad;

const M: usize = 256;

fn diffeo(a1: f64, b1: f64, a2: f64, shift: f64) -> DiffeoGrid {
    DiffeoGrid::from_fn(M, |t| {
        t + shift + a1 * t.sin() + b1 * t.cos() + a2 * (2.0 * t + 0.4).sin()
    })
    .unwrap()
}

#[test]
fn flow_roundtrip_recovers_log_derivative() {
    let band = 16;
    let dt = 1e-3;
    let u_fn = move |t: f64| -> FourierField {
        let mut f = FourierField::zeros(band);
        f.set_coeff(1, Complex64::from_polar(0.08, 1.1 * t));
        f.set_coeff(3, Complex64::from_polar(0.02, -0.7 * t + 0.5));
        f
    };
    let path = flow_from_log(
        &u_fn,
        &FlowConfig {
            grid: M,
            dt,
            steps: 1000,
        },
    )
    .unwrap();
    let recovered = log_derivative(&path, band).unwrap();
    let mut worst: f64 = 0.0;
    for (t, rec) in path.times.iter().zip(&recovered) {
        worst = worst.max(rec.sub(&u_fn(*t)).unwrap().sup_norm());
    }
    assert!(worst < 1e-6, "roundtrip error {worst:.3e}");
}

#[test]
fn flow_from_h10_trajectory_stays_horizontal() {
    // Reconstruct the group path of a constrained geodesic and check the
    // horizontality of the measured logarithmic derivative.
    let band = 24;
    let state = GeodesicState::new(
        k_n(band, 1)
            .scale(0.06)
            .add(&p_n(band, 2).scale(0.02))
            .unwrap(),
        Lambda::Scalar(0.2),
    )
    .unwrap();
    let traj = integrate(
        &ModelKind::H10,
        &state,
        &IntegratorConfig {
            dt: 1e-3,
            steps: 500,
            scheme: Scheme::Rk4,
            band,
        },
    )
    .unwrap();
    let times = traj.times.clone();
    let fields = traj.fields.clone();
    let path = flow_from_log(
        &move |t| virflow::euler_arnold::interpolate_fields(&times, &fields, t),
        &FlowConfig {
            grid: M,
            dt: 1e-3,
            steps: 500,
        },
    )
    .unwrap();
    let recovered = log_derivative(&path, band).unwrap();
    let worst_mean = recovered.iter().map(|f| f.mean().abs()).fold(0.0, f64::max);
    assert!(worst_mean < 1e-7, "horizontality drift {worst_mean:.3e}");
}

#[test]
fn rotations_act_isometrically() {
    // <Ad_rho x, Ad_rho y>_{L2} = <x, y> for rotations.
    let band = 32;
    let x = p_n(band, 2)
        .scale(0.5)
        .add(&k_n(band, 3).scale(0.3))
        .unwrap();
    let y = k_n(band, 1)
        .scale(-0.4)
        .add(&p_n(band, 5).scale(0.2))
        .unwrap();
    let rho = DiffeoGrid::rotation(M, 1.234);
    let ax = rho.ad_action(&x, band).unwrap();
    let ay = rho.ad_action(&y, band).unwrap();
    let before = inner_product(&InnerKind::H10, &x, &y).unwrap();
    let after = inner_product(&InnerKind::H10, &ax, &ay).unwrap();
    assert!((before - after).abs() < 1e-12);
    // means are preserved exactly (up to round-off)
    assert!((ax.mean() - x.mean()).abs() < 1e-13);
}

#[test]
fn central_lift_two_quadrature_crosscheck() {
    // (mu, nu) = (0, 1), small harmonic: the lift from the coupled
    // fourth-order quadrature agrees with an independent trapezoid route.
    let band = 12;
    let dt = 1e-3;
    let params = CocycleParams::new(0.0, 1.0);
    let u_fn = move |t: f64| -> FourierField {
        let mut f = FourierField::zeros(band);
        f.set_coeff(1, Complex64::from_polar(0.05, 0.8 * t));
        f.set_coeff(2, Complex64::new(0.01, -0.02));
        f
    };
    let path = flow_from_log(
        &u_fn,
        &FlowConfig {
            grid: M,
            dt,
            steps: 1000,
        },
    )
    .unwrap();
    let us: Vec<FourierField> = path.times.iter().map(|&t| u_fn(t)).collect();
    let b = central_lift(&path, &us, &params).unwrap();
    assert_eq!(b[0], 0.0);
    let integrand: Vec<f64> = path
        .diffeos
        .iter()
        .zip(&us)
        .map(|(g, u)| central_lift_integrand(g, u, &params))
        .collect();
    let mut acc = 0.0;
    let mut worst: f64 = 0.0;
    for i in 1..b.len() {
        acc += 0.5 * dt * (integrand[i - 1] + integrand[i]);
        worst = worst.max((b[i] - acc).abs());
    }
    assert!(worst < 1e-6, "central lift mismatch {worst:.3e}");
    // The lifted curve is horizontal: b' matches the cocycle integrand.
    let bdot = quad::derivative(dt, &b);
    let mut res: f64 = 0.0;
    for i in 0..b.len() {
        res = res.max((bdot[i] - integrand[i]).abs());
    }
    assert!(res < 1e-8, "lift does not satisfy its own ODE: {res:.3e}");
}

#[test]
fn vir_multiply_associative() {
    let params = CocycleParams::new(0.8, 1.3);
    let g1 = VirasoroElement {
        phi: diffeo(0.1, -0.05, 0.03, 0.2),
        b: 0.4,
    };
    let g2 = VirasoroElement {
        phi: diffeo(-0.07, 0.09, 0.02, -0.5),
        b: -0.9,
    };
    let g3 = VirasoroElement {
        phi: diffeo(0.05, 0.04, -0.04, 1.1),
        b: 0.15,
    };
    let left = vir_multiply(&vir_multiply(&g1, &g2, &params).unwrap(), &g3, &params).unwrap();
    let right = vir_multiply(&g1, &vir_multiply(&g2, &g3, &params).unwrap(), &params).unwrap();
    assert!(left.phi.sup_distance(&right.phi).unwrap() < 1e-7);
    assert!((left.b - right.b).abs() < 1e-7, "{} vs {}", left.b, right.b);
}

#[test]
fn group_cocycle_identity() {
    // c(g1, g2) + c(g1 g2, g3) = c(g1, g2 g3) + c(g2, g3) for c = mu A + nu B.
    let (mu, nu) = (1.1, 0.6);
    let g1 = diffeo(0.09, 0.02, -0.03, 0.0);
    let g2 = diffeo(-0.05, 0.08, 0.01, 0.7);
    let g3 = diffeo(0.04, -0.06, 0.05, -0.3);
    let c = |a: &DiffeoGrid, b: &DiffeoGrid| -> f64 {
        mu * group_cocycle_a(a, b).unwrap() + nu * group_cocycle_b(a, b).unwrap()
    };
    let lhs = c(&g1, &g2) + c(&g1.compose(&g2).unwrap(), &g3);
    let rhs = c(&g1, &g2.compose(&g3).unwrap()) + c(&g2, &g3);
    assert!((lhs - rhs).abs() < 1e-7, "{lhs} vs {rhs}");
}

#[test]
fn vir_group_axioms() {
    let params = CocycleParams::new(0.5, 1.0);
    // identity element
    let e = VirasoroElement {
        phi: DiffeoGrid::identity(M),
        b: 0.0,
    };
    let g = VirasoroElement {
        phi: diffeo(0.12, -0.04, 0.02, 0.9),
        b: 0.77,
    };
    let ge = vir_multiply(&g, &e, &params).unwrap();
    assert!(ge.phi.sup_distance(&g.phi).unwrap() < 1e-12);
    assert!((ge.b - g.b).abs() < 1e-12);
    // inverse from invert(phi) and the coboundary relation
    let ginv = vir_inverse(&g).unwrap();
    let prod = vir_multiply(&g, &ginv, &params).unwrap();
    assert!(prod.phi.sup_displacement() < 1e-8);
    assert!(prod.b.abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn compose_invert_roundtrip(
        a1 in -0.15f64..0.15,
        b1 in -0.15f64..0.15,
        a2 in -0.07f64..0.07,
        shift in -1.0f64..1.0,
    ) {
        let f = diffeo(a1, b1, a2, shift);
        let finv = f.invert().unwrap();
        prop_assert!(f.compose(&finv).unwrap().sup_displacement() < 1e-9);
        prop_assert!(finv.compose(&f).unwrap().sup_displacement() < 1e-9);
    }

    #[test]
    fn ad_respects_composition(
        a1 in -0.1f64..0.1,
        b1 in -0.1f64..0.1,
        shift in -0.6f64..0.6,
    ) {
        let band = 48;
        let x = k_n(band, 1).scale(0.5);
        let f = diffeo(a1, b1, 0.0, shift);
        let g = diffeo(-b1, a1, 0.02, -shift);
        let lhs = f.compose(&g).unwrap().ad_action(&x, band).unwrap();
        let rhs = f
            .ad_action(&g.ad_action(&x, band).unwrap(), band)
            .unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_coeff_abs() < 1e-7);
    }
}

#[test]
fn central_lift_satisfies_the_group_law() {
    // For the horizontal lift (gamma(t), b(t)) and any split t + s, the
    // group law forces
    //   b(t+s) = b(t) + b_inc(s) + mu A(gamma_t, delta_s) + nu B(gamma_t, delta_s)
    // where delta_s = gamma_t^{-1} o gamma_{t+s} is the increment (whose
    // left logarithmic derivative is u(t + .)) and b_inc its own lift.
    // Left side: time quadrature of the cocycle integrand; right side: the
    // group-level cocycle integrals. Entirely different machinery.
    let band = 12;
    let dt = 1e-3;
    let params = CocycleParams::new(0.7, 1.3);
    let u_fn = move |t: f64| -> FourierField {
        let mut f = FourierField::zeros(band);
        f.set_coeff(1, Complex64::from_polar(0.06, 0.9 * t + 0.1));
        f.set_coeff(2, Complex64::from_polar(0.03, -0.6 * t));
        f
    };
    let path = flow_from_log(
        &u_fn,
        &FlowConfig {
            grid: M,
            dt,
            steps: 500,
        },
    )
    .unwrap();
    let us: Vec<FourierField> = path.times.iter().map(|&t| u_fn(t)).collect();
    let b_full = central_lift(&path, &us, &params).unwrap();

    let (it, is) = (300usize, 200usize); // t = 0.3, s = 0.2
    let t_split = path.times[it];
    // Increment flow: left log derivative of gamma_t^{-1} gamma_{t+tau}
    // is u(t + tau).
    let inc_path = flow_from_log(
        &move |tau| u_fn(t_split + tau),
        &FlowConfig {
            grid: M,
            dt,
            steps: is,
        },
    )
    .unwrap();
    let inc_us: Vec<FourierField> = inc_path
        .times
        .iter()
        .map(|&tau| u_fn(t_split + tau))
        .collect();
    let b_inc = central_lift(&inc_path, &inc_us, &params).unwrap();

    // Flow consistency: gamma_t o delta_s = gamma_{t+s}.
    let gamma_t = &path.diffeos[it];
    let delta_s = inc_path.diffeos.last().unwrap();
    let composed = gamma_t.compose(delta_s).unwrap();
    assert!(
        composed.sup_distance(&path.diffeos[it + is]).unwrap() < 1e-8,
        "flow increments do not compose"
    );

    let rhs = b_full[it]
        + b_inc[is]
        + params.mu * group_cocycle_a(gamma_t, delta_s).unwrap()
        + params.nu * group_cocycle_b(gamma_t, delta_s).unwrap();
    let lhs = b_full[it + is];
    assert!(
        (lhs - rhs).abs() < 1e-8,
        "group law violated: {lhs} vs {rhs}"
    );
}
