//! Drives the C surface from Rust: handle lifecycles, split-buffer
//! marshaling, status codes, and agreement with the underlying library.

use num_complex::Complex64;
use std::ptr;
use symsep::hardfn::{g_a_norm_sq, g_eval, g_prime_eval, mobius_trunc, HardFnSpec};
use symsep::sampling::{cue_sampler, sample_uniform_circle, substream, SetInput};
use symsep_ffi::*;

unsafe fn new_spec(n: usize, d: usize) -> *mut SymsepSpec {
    let mut spec = ptr::null_mut();
    assert_eq!(symsep_spec_new(n, d, &mut spec), SymsepStatus::Ok);
    assert!(!spec.is_null());
    spec
}

#[test]
fn spec_lifecycle_and_accessors() {
    unsafe {
        let spec = new_spec(8, 2);
        let (mut n, mut d, mut d_hat, mut in_regime) = (0usize, 0usize, 0u32, false);
        assert_eq!(symsep_spec_n(spec, &mut n), SymsepStatus::Ok);
        assert_eq!(symsep_spec_d(spec, &mut d), SymsepStatus::Ok);
        assert_eq!(symsep_spec_d_hat(spec, &mut d_hat), SymsepStatus::Ok);
        assert_eq!(symsep_spec_in_regime(spec, &mut in_regime), SymsepStatus::Ok);
        assert_eq!((n, d, d_hat, in_regime), (8, 2, 2, true));

        let mut norm = 0.0;
        assert_eq!(symsep_spec_a_norm_sq(spec, &mut norm), SymsepStatus::Ok);
        assert_eq!(norm, g_a_norm_sq(&HardFnSpec::new(8, 2).unwrap()).unwrap());

        symsep_spec_free(spec);
        symsep_spec_free(ptr::null_mut());
        symsep_sampler_free(ptr::null_mut());
    }
}

#[test]
fn split_buffer_evaluation_matches_library() {
    let core_spec = HardFnSpec::new(8, 2).unwrap();
    let mut rng = substream(3, "ffi-tests", "roundtrip", 0);
    let entries = sample_uniform_circle(&mut rng, 2 * 16);
    let x = SetInput::from_fn(2, 16, |row, col| entries[row * 16 + col]);
    let re: Vec<f64> = entries.iter().map(|z| z.re).collect();
    let im: Vec<f64> = entries.iter().map(|z| z.im).collect();

    unsafe {
        let spec = new_spec(8, 2);
        let (mut out_re, mut out_im) = (0.0, 0.0);
        assert_eq!(
            symsep_g_eval(spec, re.as_ptr(), im.as_ptr(), re.len(), &mut out_re, &mut out_im),
            SymsepStatus::Ok
        );
        let expected = g_eval(&core_spec, &x).unwrap();
        assert_eq!(Complex64::new(out_re, out_im), expected);

        assert_eq!(
            symsep_g_prime_eval(spec, re.as_ptr(), im.as_ptr(), re.len(), &mut out_re, &mut out_im),
            SymsepStatus::Ok
        );
        let expected = g_prime_eval(&core_spec, &x).unwrap();
        assert_eq!(Complex64::new(out_re, out_im), expected);

        symsep_spec_free(spec);
    }

    unsafe {
        let (mut out_re, mut out_im) = (0.0, 0.0);
        assert_eq!(
            symsep_mobius_trunc(3, 0.4, -0.2, &mut out_re, &mut out_im),
            SymsepStatus::Ok
        );
        assert_eq!(
            Complex64::new(out_re, out_im),
            mobius_trunc(3, Complex64::new(0.4, -0.2))
        );
    }
}

#[test]
fn status_codes_cover_the_failure_modes() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(
            symsep_spec_new(8, 2, ptr::null_mut()),
            SymsepStatus::NullPointer
        );
        assert_eq!(symsep_spec_new(0, 2, &mut spec), SymsepStatus::InvalidArgument);
        assert_eq!(
            symsep_spec_with_d_hat(8, 2, 5, &mut spec),
            SymsepStatus::InvalidArgument
        );

        assert_eq!(symsep_spec_with_d_hat(4, 2, 2, &mut spec), SymsepStatus::Ok);
        let mut norm = 0.0;
        assert_eq!(symsep_spec_a_norm_sq(spec, &mut norm), SymsepStatus::OutOfRegime);

        let (re, im) = ([0.0f64; 4], [0.0f64; 4]);
        let (mut out_re, mut out_im) = (0.0, 0.0);
        assert_eq!(
            symsep_g_eval(spec, re.as_ptr(), im.as_ptr(), 4, &mut out_re, &mut out_im),
            SymsepStatus::DimensionMismatch
        );
        assert_eq!(
            symsep_g_eval(spec, ptr::null(), im.as_ptr(), 16, &mut out_re, &mut out_im),
            SymsepStatus::NullPointer
        );
        symsep_spec_free(spec);

        let mut out = 0.0;
        assert_eq!(symsep_bound_1d(7, 1, &mut out), SymsepStatus::InvalidArgument);
        assert_eq!(symsep_bound_1d(8, 1, ptr::null_mut()), SymsepStatus::NullPointer);

        let mut pool = 0u64;
        assert_eq!(
            symsep_bound_simple_highd(8, 2, 0, &mut out, &mut pool),
            SymsepStatus::OutOfRegime
        );

        assert_eq!(
            symsep_hard_threshold(0, 2, &mut out),
            SymsepStatus::InvalidArgument
        );

        let mut sampler = ptr::null_mut();
        assert_eq!(
            symsep_sampler_new(0, 1, 0, 1, &mut sampler),
            SymsepStatus::InvalidArgument
        );
    }
}

#[test]
fn bound_values_match_the_library() {
    unsafe {
        let mut out = 0.0;
        assert_eq!(symsep_bound_1d(8, 2, &mut out), SymsepStatus::Ok);
        assert_eq!(out, 0.5);

        let mut pool = 0u64;
        assert_eq!(
            symsep_bound_simple_highd(4, 3, 0, &mut out, &mut pool),
            SymsepStatus::Ok
        );
        assert_eq!((out, pool), (1.0 / 6.0, 6));

        let spec = new_spec(8, 2);
        let (mut exact, mut closed) = (0.0, 0.0);
        assert_eq!(
            symsep_bound_hard_highd(spec, 0, &mut exact, &mut closed),
            SymsepStatus::Ok
        );
        let core = symsep::bounds::bound_hard_highd(&HardFnSpec::new(8, 2).unwrap(), 0).unwrap();
        assert_eq!((exact, closed), (core.exact(), core.closed()));
        symsep_spec_free(spec);

        let mut threshold = 0.0;
        assert_eq!(symsep_hard_threshold(8, 2, &mut threshold), SymsepStatus::Ok);
        assert_eq!(threshold, symsep::bounds::hard_threshold(8, 2));
    }
}

#[test]
fn sampler_is_deterministic_and_shape_checked() {
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(symsep_sampler_new(4, 7, 160, 4, &mut a), SymsepStatus::Ok);
        assert_eq!(symsep_sampler_new(4, 7, 160, 4, &mut b), SymsepStatus::Ok);

        let mut core = cue_sampler(4, substream(7, "ffi", "cue", 0), 160, 4);
        let (mut theta_a, mut theta_b) = ([0.0f64; 4], [0.0f64; 4]);
        for _ in 0..3 {
            assert_eq!(
                symsep_sampler_next(a, theta_a.as_mut_ptr(), 4),
                SymsepStatus::Ok
            );
            assert_eq!(
                symsep_sampler_next(b, theta_b.as_mut_ptr(), 4),
                SymsepStatus::Ok
            );
            assert_eq!(theta_a, theta_b);
            assert_eq!(theta_a.to_vec(), core.next().unwrap());
            for angle in theta_a {
                assert!((0.0..std::f64::consts::TAU).contains(&angle));
            }
        }

        assert_eq!(
            symsep_sampler_next(a, theta_a.as_mut_ptr(), 3),
            SymsepStatus::DimensionMismatch
        );
        symsep_sampler_free(a);
        symsep_sampler_free(b);
    }
}
