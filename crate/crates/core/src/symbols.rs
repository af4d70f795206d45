//! Where each model symbol lives.
//!
//! Every symbol used by an implemented equation is housed by exactly one type
//! field or coefficient table. The table is checked by the tests below.

/// `(symbol, owner)` pairs.
///
/// ```
/// use std::collections::BTreeSet;
/// use rackforce::symbols::SYMBOL_HOUSING;
///
/// let symbols: BTreeSet<_> = SYMBOL_HOUSING.iter().map(|(s, _)| *s).collect();
/// assert_eq!(symbols.len(), SYMBOL_HOUSING.len());
/// assert!(SYMBOL_HOUSING.iter().any(|(s, o)| *s == "F_R" && o.contains("rack_force")));
/// ```
pub const SYMBOL_HOUSING: &[(&str, &str)] = &[
    ("m", "VehicleParams::mass_kg"),
    ("I", "VehicleParams::yaw_inertia_kgm2"),
    ("l_f", "VehicleParams::dist_cg_front_m"),
    ("l_r", "VehicleParams::dist_cg_rear_m"),
    ("i_p", "VehicleParams::moment_to_rack_ratio_per_m"),
    ("g", "VehicleParams::gravity_mps2"),
    ("C_z", "TireParams::vertical_stiffness_npm"),
    ("q_Fz1", "TireParams::q_fz1"),
    ("q_Fz2", "TireParams::q_fz2"),
    ("q_Fz3", "TireParams::q_fz3"),
    ("B_y", "LateralCoefficients::b_y"),
    ("C_y", "LateralCoefficients::c_y"),
    ("D_y", "LateralCoefficients::d_y"),
    ("E_y", "LateralCoefficients::e_y"),
    ("S_Hy", "LateralCoefficients::s_hy"),
    ("S_Vy", "LateralCoefficients::s_vy"),
    ("B_t", "TrailCoefficients::b_t"),
    ("C_t", "TrailCoefficients::c_t"),
    ("D_t", "TrailCoefficients::d_t"),
    ("E_t", "TrailCoefficients::e_t"),
    ("S_Ht", "TrailCoefficients::s_ht"),
    ("B_r", "ResidualCoefficients::b_r"),
    ("D_r", "ResidualCoefficients::d_r"),
    ("B_N", "NonLaggingCoefficients::b_n"),
    ("C_N", "NonLaggingCoefficients::c_n"),
    ("D_N", "NonLaggingCoefficients::d_n"),
    ("v", "VehicleState::lateral_speed_mps"),
    ("psi_dot", "VehicleState::yaw_rate_radps"),
    ("delta", "DriverInputs::steering_angle_rad"),
    ("u", "DriverInputs::forward_speed_mps"),
    (
        "theta",
        "RoadInputs::lateral_slope_rad | RoadInputs::longitudinal_slope_rad by SlopeMode",
    ),
    ("gamma", "CleatSpec::yaw_angle_rad"),
    ("w", "EffectiveRoadPoint::effective_height_m"),
    ("beta_x", "EffectiveRoadPoint::effective_lateral_slope_rad"),
    (
        "beta_y",
        "EffectiveRoadPoint::effective_longitudinal_slope_rad",
    ),
    ("F_yf", "AxleForces::front_lateral_n"),
    ("F_yr", "AxleForces::rear_lateral_n"),
    ("v_dot", "StateDerivative::lateral_accel_mps2"),
    ("psi_ddot", "StateDerivative::yaw_accel_radps2"),
    ("F_z", "TireLoadState::normal_force_n"),
    ("z_a", "TireLoadState::static_deflection_m"),
    ("rho_z", "TireLoadState::radial_deflection_m"),
    ("F_z^rad", "TireLoadState::radial_force_n"),
    ("F_yN", "TireLoadState::non_lagging_force_n"),
    ("F_cN", "TireLoadState::contact_patch_normal_n"),
    ("F_y", "TireOutput::lateral_force_n"),
    ("t", "TireOutput::pneumatic_trail_m"),
    ("M_z", "TireOutput::aligning_moment_nm"),
    ("alpha", "vehicle::slip_angle return value"),
    ("alpha_y", "SlipTerms::lateral"),
    ("alpha_t", "SlipTerms::trail"),
    ("alpha_r", "SlipTerms::residual"),
    (
        "M_z1",
        "EstimateSample front_left.output.aligning_moment_nm",
    ),
    (
        "M_z2",
        "EstimateSample front_right.output.aligning_moment_nm",
    ),
    ("F_R", "VariantSample::rack_force_n"),
];
