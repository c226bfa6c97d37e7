//! Superoperators in the row-major Liouville representation: a driven,
//! damped qubit relaxing to its steady state.

use qtherm::hilbert::{DensityMatrix, Operator};
use qtherm::linalg;
use qtherm::liouville::{dissipator_superop, hamiltonian_superop, propagate, stationary_state, vec};

fn main() -> qtherm::Result<()> {
    let drive = linalg::ket_bra(2, 0, 1) + linalg::ket_bra(2, 1, 0);
    let h = Operator::hermitian(linalg::from_real_diagonal(&[0.0, 1.0]) + drive.scale(0.2))?;
    let decay = Operator::new(linalg::ket_bra(2, 0, 1).scale(0.3f64.sqrt()))?;
    let l = hamiltonian_superop(&h)?.add(&dissipator_superop(&[decay])?)?;

    let rho0 = DensityMatrix::basis(2, 1);
    for t in [0.0, 1.0, 5.0, 20.0] {
        let out = propagate(&l, t)?.apply(&vec(&rho0))?;
        let p: Vec<f64> = [0, 3].iter().map(|&k| out.entries()[k].re).collect();
        println!("t = {t:>4}: populations {:.4} {:.4}", p[0], p[1]);
    }
    let ss = stationary_state(&l)?;
    println!("steady state populations {:?}", ss.populations());
    Ok(())
}
