//! Published reference values for the reproduction grids, five decimals as
//! printed. They are reported next to our own numbers and never used as the
//! pass/fail reference.

/// Sample sizes of the multi-`n` grids.
pub const GRID_SIZES: [usize; 4] = [20, 50, 100, 500];

/// Clayton `d = 3`, `θ = 5`: `(direction, exact, mean at n = 500)`.
pub const T1_THETA: f64 = 5.0;
pub const T1_SIZE: usize = 500;
pub const T1_ROWS: [(&str, f64, f64); 8] = [
    ("---", 0.68975, 0.68924),
    ("-++", -0.24935, -0.24848),
    ("+-+", -0.24935, -0.24889),
    ("++-", -0.24935, -0.24874),
    ("+--", -0.22020, -0.22004),
    ("--+", -0.22020, -0.22030),
    ("-+-", -0.22020, -0.22045),
    ("+++", 0.71890, 0.71768),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRow {
    pub theta: f64,
    pub exact: f64,
    /// Means at [`GRID_SIZES`].
    pub means: [f64; 4],
}

/// Clayton `d = 4`, single direction.
pub const T3_DIRECTION: &str = "-++-";
pub const T3_ROWS: [ThetaRow; 5] = [
    ThetaRow { theta: 0.4, exact: -0.02042, means: [-0.02660, -0.02147, -0.02198, -0.02036] },
    ThetaRow { theta: 0.6, exact: -0.02829, means: [-0.03366, -0.02891, -0.02960, -0.02816] },
    ThetaRow { theta: 1.0, exact: -0.04053, means: [-0.04402, -0.04090, -0.04141, -0.04029] },
    ThetaRow { theta: 2.0, exact: -0.05946, means: [-0.06104, -0.05920, -0.06000, -0.05915] },
    ThetaRow { theta: 5.0, exact: -0.08234, means: [-0.08166, -0.08144, -0.08218, -0.08213] },
];

/// Clayton `d = 5`, single direction.
pub const T4_DIRECTION: &str = "+-+-+";
pub const T4_ROWS: [ThetaRow; 5] = [
    ThetaRow { theta: 0.4, exact: -0.01105, means: [-0.01144, -0.01246, -0.01064, -0.01125] },
    ThetaRow { theta: 0.6, exact: -0.01483, means: [-0.01607, -0.01475, -0.01491, -0.01475] },
    ThetaRow { theta: 1.0, exact: -0.02042, means: [-0.02135, -0.02085, -0.02135, -0.02055] },
    ThetaRow { theta: 2.0, exact: -0.02864, means: [-0.02897, -0.02892, -0.02863, -0.02865] },
    ThetaRow { theta: 5.0, exact: -0.03821, means: [-0.03756, -0.03789, -0.03749, -0.03817] },
];

/// Cuadras–Augé `d = 4`: means at `n = 500` for every direction.
pub const T6_SIZE: usize = 500;
pub const T6_THETAS: [f64; 2] = [0.4, 0.8];
pub const T6_MEANS: [[(&str, f64); 16]; 2] = [
    [
        ("----", 0.38348),
        ("+---", -0.06336),
        ("-+--", -0.063197),
        ("++--", -0.04292),
        ("--+-", -0.06376),
        ("+-+-", -0.04352),
        ("-++-", -0.04279),
        ("+++-", -0.06392),
        ("---+", -0.06372),
        ("+--+", -0.04319),
        ("-+-+", -0.04314),
        ("++-+", -0.06395),
        ("--++", -0.04230),
        ("+-++", -0.06362),
        ("-+++", -0.06458),
        ("++++", 0.38450),
    ],
    [
        ("----", 0.77980),
        ("+---", -0.12969),
        ("-+--", -0.12967),
        ("++--", -0.08708),
        ("--+-", -0.12984),
        ("+-+-", -0.08672),
        ("-++-", -0.08692),
        ("+++-", -0.12987),
        ("---+", -0.12956),
        ("+--+", -0.08715),
        ("-+-+", -0.08731),
        ("++-+", -0.12933),
        ("--++", -0.08718),
        ("+-++", -0.12965),
        ("-+++", -0.12932),
        ("++++", 0.77950),
    ],
];

/// Published mean for a Cuadras–Augé cell, if one was printed.
pub fn t6_mean(theta: f64, alpha: &str, n: usize) -> Option<f64> {
    if n != T6_SIZE {
        return None;
    }
    let k = T6_THETAS.iter().position(|&t| t == theta)?;
    T6_MEANS[k].iter().find(|(a, _)| *a == alpha).map(|(_, v)| *v)
}

pub fn theta_row(rows: &[ThetaRow], theta: f64) -> Option<&ThetaRow> {
    rows.iter().find(|r| r.theta == theta)
}

pub fn grid_mean(row: &ThetaRow, n: usize) -> Option<f64> {
    GRID_SIZES.iter().position(|&m| m == n).map(|k| row.means[k])
}
