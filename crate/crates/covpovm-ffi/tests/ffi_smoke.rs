//! Exercises the C ABI through the exported symbols exactly as a foreign
//! caller would: create handles, compute, read results, free.

use std::ptr;

use covpovm_ffi::*;

fn last_error() -> String {
    let needed = unsafe { covpovm_last_error_message(ptr::null_mut(), 0) };
    let mut buf = vec![0i8; needed + 1];
    unsafe { covpovm_last_error_message(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..needed].iter().map(|b| *b as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn disk_element_through_the_c_abi() {
    unsafe {
        let mut t: *mut CovpovmDensity = ptr::null_mut();
        assert_eq!(covpovm_density_vacuum(16, &mut t), CovpovmStatus::Ok);
        assert_eq!(covpovm_density_dim(t), 16);

        let mut region: *mut CovpovmRegion = ptr::null_mut();
        assert_eq!(covpovm_region_new(&mut region), CovpovmStatus::Ok);
        assert_eq!(
            covpovm_region_add_disk(region, 0.0, 0.0, 2.0),
            CovpovmStatus::Ok
        );

        let mut op: *mut CovpovmOperator = ptr::null_mut();
        assert_eq!(
            covpovm_povm_element(
                t,
                region,
                CovpovmQuadRule::Trapezoid,
                201,
                201,
                ptr::null(),
                &mut op,
            ),
            CovpovmStatus::Ok
        );
        assert_eq!(covpovm_operator_dim(op), 16);

        let (mut re, mut im) = (0.0f64, 0.0f64);
        assert_eq!(
            covpovm_operator_entry(op, 0, 0, &mut re, &mut im),
            CovpovmStatus::Ok
        );
        let expect = 1.0 - (-2.0f64).exp();
        assert!((re - expect).abs() <= 2e-3, "entry {re} vs {expect}");
        assert!(im.abs() <= 1e-12);

        let mut buf = vec![0.0f64; 2 * 16 * 16];
        assert_eq!(
            covpovm_operator_copy(op, buf.as_mut_ptr(), buf.len()),
            CovpovmStatus::Ok
        );
        assert_eq!(buf[0], re);

        // probability of the vacuum over the same disk equals the entry
        let mut prob = 0.0f64;
        assert_eq!(
            covpovm_probability(
                t,
                t,
                region,
                CovpovmQuadRule::Trapezoid,
                201,
                201,
                ptr::null(),
                &mut prob,
            ),
            CovpovmStatus::Ok
        );
        assert!((prob - re).abs() <= 1e-12);

        covpovm_operator_free(op);
        covpovm_region_free(region);
        covpovm_density_free(t);
    }
}

#[test]
fn outcome_density_and_errors() {
    unsafe {
        let mut t: *mut CovpovmDensity = ptr::null_mut();
        let mut rho: *mut CovpovmDensity = ptr::null_mut();
        assert_eq!(covpovm_density_vacuum(8, &mut t), CovpovmStatus::Ok);
        assert_eq!(covpovm_density_fock(10, 1, &mut rho), CovpovmStatus::Ok);

        let mut out = 0.0f64;
        // mismatched dimensions must fail with a descriptive message
        assert_eq!(
            covpovm_outcome_density(t, rho, 0.0, 0.0, &mut out),
            CovpovmStatus::DimensionMismatch
        );
        assert!(last_error().contains("dimension mismatch"));

        covpovm_density_free(rho);
        assert_eq!(covpovm_density_fock(8, 1, &mut rho), CovpovmStatus::Ok);
        assert_eq!(
            covpovm_outcome_density(t, rho, 0.0, 0.0, &mut out),
            CovpovmStatus::Ok
        );
        assert!(out.abs() <= 1e-14, "orthogonal states at the origin: {out}");

        // invalid construction reports InvalidArgument
        let mut bad: *mut CovpovmDensity = ptr::null_mut();
        assert_eq!(
            covpovm_density_vacuum(1, &mut bad),
            CovpovmStatus::InvalidArgument
        );
        assert_eq!(
            covpovm_density_fock(4, 9, &mut bad),
            CovpovmStatus::InvalidArgument
        );

        // null pointers are caught
        assert_eq!(
            covpovm_outcome_density(ptr::null(), rho, 0.0, 0.0, &mut out),
            CovpovmStatus::NullPointer
        );

        covpovm_density_free(rho);
        covpovm_density_free(t);
    }
}

#[test]
fn density_from_entries_round_trip() {
    unsafe {
        // diag(0.5, 0.5) as interleaved doubles
        let entries = [0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0];
        let mut d: *mut CovpovmDensity = ptr::null_mut();
        assert_eq!(
            covpovm_density_from_entries(2, entries.as_ptr(), 1e-10, &mut d),
            CovpovmStatus::Ok
        );
        assert_eq!(covpovm_density_dim(d), 2);
        covpovm_density_free(d);

        // non-unit trace rejected
        let bad = [0.4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0];
        assert_eq!(
            covpovm_density_from_entries(2, bad.as_ptr(), 1e-10, &mut d),
            CovpovmStatus::InvalidArgument
        );
        assert!(last_error().contains("trace defect"));
    }
}

#[test]
fn covariance_and_normalization_scalars() {
    unsafe {
        let mut t: *mut CovpovmDensity = ptr::null_mut();
        assert_eq!(covpovm_density_vacuum(16, &mut t), CovpovmStatus::Ok);
        let mut region: *mut CovpovmRegion = ptr::null_mut();
        assert_eq!(covpovm_region_new(&mut region), CovpovmStatus::Ok);
        assert_eq!(
            covpovm_region_add_disk(region, 0.0, 0.0, 1.0),
            CovpovmStatus::Ok
        );

        let mut residual = f64::NAN;
        assert_eq!(
            covpovm_covariance_residual(
                t,
                0.25,
                0.0,
                region,
                CovpovmQuadRule::GaussLegendre,
                40,
                40,
                ptr::null(),
                &mut residual,
            ),
            CovpovmStatus::Ok
        );
        assert!(residual <= 1e-6, "residual {residual}");

        let mut defect = f64::NAN;
        assert_eq!(
            covpovm_normalization_defect(t, 6.0, 2, 64, &mut defect),
            CovpovmStatus::Ok
        );
        assert!(defect <= 1e-2, "defect {defect}");

        covpovm_region_free(region);
        covpovm_density_free(t);
    }
}

#[test]
fn half_line_functions_through_the_c_abi() {
    unsafe {
        let mut grid: *mut CovpovmGrid = ptr::null_mut();
        assert_eq!(
            covpovm_grid_new(1e-3, 1.02, 512, &mut grid),
            CovpovmStatus::Ok
        );
        assert_eq!(covpovm_grid_len(grid), 512);

        // a bump in the middle third of the grid
        let mut u: *mut CovpovmFunction = ptr::null_mut();
        assert_eq!(
            covpovm_function_bump(grid, 0.16, 0.7, &mut u),
            CovpovmStatus::Ok
        );
        let mut nsq = 0.0f64;
        assert_eq!(covpovm_function_norm_sq(u, &mut nsq), CovpovmStatus::Ok);
        assert!((nsq - 1.0).abs() <= 1e-12);

        // incompatible dilation is rejected with the nearest named
        let mut moved: *mut CovpovmFunction = ptr::null_mut();
        assert_eq!(
            covpovm_apply_pi_plus(0.0, 1.03, u, 0.0, &mut moved),
            CovpovmStatus::InvalidArgument
        );
        assert!(last_error().contains("nearest compatible"));
        assert_eq!(
            covpovm_apply_pi_plus(0.5, 1.02 * 1.02, u, 0.0, &mut moved),
            CovpovmStatus::Ok
        );

        // orthogonality defect over the reference window
        let mut defect = f64::NAN;
        assert_eq!(
            covpovm_orthogonality_defect(
                u,
                u,
                -10.0,
                10.0,
                1.02f64.powi(-150),
                1.02f64.powi(150),
                321,
                &mut defect,
            ),
            CovpovmStatus::Ok
        );
        assert!(defect <= 5e-2, "defect {defect}");

        // rank-one quadratic form agrees with the wavelet-side integral
        let mut qf = f64::NAN;
        assert_eq!(
            covpovm_quadratic_form_rank_one(
                u,
                u,
                -2.0,
                2.0,
                1.02f64.powi(-20),
                1.02f64.powi(20),
                41,
                &mut qf,
            ),
            CovpovmStatus::Ok
        );
        assert!((0.0..=1.0 + 1e-9).contains(&qf));

        let (mut re, mut im) = (f64::NAN, f64::NAN);
        assert_eq!(
            covpovm_wavelet_coefficient(u, u, 0.3, 1.02, &mut re, &mut im),
            CovpovmStatus::Ok
        );
        assert!(re.is_finite() && im.is_finite());

        covpovm_function_free(moved);
        covpovm_function_free(u);
        covpovm_grid_free(grid);
    }
}
