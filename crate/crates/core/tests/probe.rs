// temporary numeric probe, removed before finalizing
use udn_sg_core::analytic::{coverage_probability, coverage_probability_general};
use udn_sg_core::quad::QuadratureControl;
use udn_sg_core::rate::{ase, ergodic_rate};
use udn_sg_core::{Deployment, PathLossModel, Scenario};

#[test]
fn probe_hex_point() {
    let ctrl = QuadratureControl::default();
    let s = Scenario::noiseless(Deployment::hex(1e-2).unwrap(), PathLossModel::l1(5.0, 4.0));
    let t0 = std::time::Instant::now();
    let pc = coverage_probability(&s, 1.0, &ctrl).unwrap();
    println!("pc_hex(T=1, lam=1e-2, h=5, a=4) = {pc:.8} (python oracle 0.437150)  [{:?}]", t0.elapsed());

    let s40 = Scenario::noiseless(Deployment::hex(40.0).unwrap(), PathLossModel::l1(1.0, 4.0));
    for t in [1e-3, 1e-2] {
        let t1 = std::time::Instant::now();
        let pc = coverage_probability_general(&s40, t, &ctrl).unwrap();
        println!("pc_hex(T={t}, lam=40, h=1) = {pc:.8} (python: T=1e-3 -> 0.88192, 1e-2 -> 0.28517)  [{:?}]", t1.elapsed());
    }

    let t2 = std::time::Instant::now();
    let udn = Scenario::noiseless(Deployment::hex(1000.0).unwrap(), PathLossModel::l1(1.0, 4.0));
    let a = ase(&udn, &ctrl).unwrap();
    println!("lam*tau(HEX lam=1e3 h=1 a=4) = {:.6} (python 0.459126) [{:?}]", a.value, t2.elapsed());

    let t3 = std::time::Instant::now();
    let line = Scenario::noiseless(Deployment::line(1.0).unwrap(), PathLossModel::l0(2.0));
    let tau = ergodic_rate(&line, &ctrl).unwrap();
    println!("tau(LINE L0 a=2) = {:.6} (3.03697) [{:?}]", tau.value, t3.elapsed());

    // pc probes vs python: T=0.1 -> 0.9634213551, 1 -> 0.7474827225, 10 -> 0.3203118374
    for t in [0.1, 1.0, 10.0] {
        let pc = coverage_probability(&line, t, &ctrl).unwrap();
        println!("pc_line_l0(T={t}) = {pc:.10}");
    }
    // large T behavior ~ 2/(pi sqrt T)
    for t in [1e4, 1e8, 1e12] {
        let pc = coverage_probability(&line, t, &ctrl).unwrap();
        let approx = 2.0 / (std::f64::consts::PI * t.sqrt());
        println!("pc_line_l0(T={t:.0e}) = {pc:.6e}  ~ {approx:.6e}");
    }
}
