//! Published reference values for the confined donor (A = 2 unless noted),
//! kept as printed so comparisons can be made in units of the last digit.

use crate::error::Result;
pub use crate::hydrogen::ClosedForm;
use crate::numerics::{Float, PrecisionContext};

/// Ground-state (l = 0) or 2p (l = 1) energy at one box radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnergyRow {
    pub radius: &'static str,
    /// Spectral parameter; an `i` suffix marks `a = iκ`.
    pub parameter: &'static str,
    pub energy: &'static str,
    /// Row is one of the exactly solvable radii.
    pub exact: bool,
}

const fn row(radius: &'static str, parameter: &'static str, energy: &'static str) -> EnergyRow {
    EnergyRow {
        radius,
        parameter,
        energy,
        exact: false,
    }
}

/// 1s energies in Rydbergs.
pub const GROUND_STATE: [EnergyRow; 25] = [
    row("0.1", "30.62655836555364042852i", "937.986077318663675020"),
    row("0.2", "14.90435230641164788003i", "222.139717673638207696"),
    row("0.3", "9.65322613176772744950i", "93.184774751043322516"),
    row("0.4", "7.01908958547066506848i", "49.267618608862752786"),
    row("0.5", "5.43101648503303286457i", "29.495940060700559289"),
    row("0.6", "4.36525092203102298622i", "19.055415612292696322"),
    row("0.7", "3.59720061360254468531i", "12.939852254502523992"),
    row("0.8", "3.01442537841274960839i", "9.086760362018848673"),
    row("0.9", "2.55428641159918422480i", "6.524379072480237168"),
    row("1.0", "2.17898640018870412738i", "4.747981732207327454"),
    row("1.2", "1.59330788933196414270i", "2.538630030207478496"),
    row("1.4", "1.13763360917677905696i", "1.294210228728584474"),
    row("1.6", "0.73663058942207546649i", "0.542624625272314320"),
    row("1.8", "0.25517152188999072415i", "0.065112505583654015"),
    EnergyRow {
        radius: "2.0",
        parameter: "0.5",
        energy: "-0.25",
        exact: true,
    },
    row("2.2", "0.68122444390542722915", "-0.464066742974258570"),
    row("2.4", "0.78281288587317251399", "-0.612796014289084615"),
    row("2.6", "0.84732318986827135552", "-0.717956588088542630"),
    row("2.8", "0.89069253587844113367", "-0.793333193469568146"),
    row("3.0", "0.92083363072104797435", "-0.847934575466907348"),
    row("3.2", "0.94223455502719141281", "-0.887805956687289402"),
    row("3.4", "0.95765089374931601763", "-0.917095234298863756"),
    row("3.6", "0.96886651941351939741", "-0.938702332440467559"),
    row("3.8", "0.97708075821092941885", "-0.954686808066044717"),
    row("4.0", "0.98312288354815749983", "-0.966530604156044052"),
];

/// 2p energies in Rydbergs.
pub const TWO_P: [EnergyRow; 5] = [
    row("0.4", "10.81185679890724350822i", "116.896247440076786588403"),
    row("1", "4.05540092128037668383i", "16.446276632321727964741"),
    row("2", "1.77539786279376878065i", "3.152037571212681836807"),
    row("4", "0.53577436242126780133i", "0.287054167427916019155"),
    row("8", "0.45705594057219478244", "-0.208900132812333648630"),
];

/// Box radius (Bohr radii) at which state `(n, l)` reaches E = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalRow {
    pub l: u32,
    pub n: u32,
    pub radius: &'static str,
}

const fn crit(l: u32, n: u32, radius: &'static str) -> CriticalRow {
    CriticalRow { l, n, radius }
}

pub const CRITICAL_RADII: [CriticalRow; 12] = [
    crit(0, 1, "1.8352463302655"),
    crit(0, 2, "6.1523070402118"),
    crit(0, 3, "12.9374317368921"),
    crit(0, 4, "22.1900958517256"),
    crit(0, 5, "33.9102067841092"),
    crit(0, 6, "48.0977381378387"),
    crit(1, 1, "5.0883082272750"),
    crit(1, 2, "11.9096965680046"),
    crit(1, 3, "21.1744312282624"),
    crit(1, 4, "32.9001067818760"),
    crit(1, 5, "47.0906749290209"),
    crit(1, 6, "63.7474594844094"),
];

/// Exactly solvable configurations: `A·R` and `E/A²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactRow {
    pub n: u32,
    pub l: u32,
    pub m: u32,
    /// Closed form of `A·R` where one is printed.
    pub closed: Option<ClosedForm>,
    /// `A·R` to the printed digits where only a number is given.
    pub printed: Option<&'static str>,
    /// `E = −A²/energy_denominator`.
    pub energy_denominator: u32,
}

const fn closed(n: u32, l: u32, m: u32, scale: u32, base: u32, sign: i32, den: u32) -> ExactRow {
    ExactRow {
        n,
        l,
        m,
        closed: Some(ClosedForm { scale, base, sign }),
        printed: None,
        energy_denominator: den,
    }
}

const fn printed(m: u32, value: &'static str) -> ExactRow {
    ExactRow {
        n: 3,
        l: 0,
        m,
        closed: None,
        printed: Some(value),
        energy_denominator: 64,
    }
}

pub const EXACT: [ExactRow; 15] = [
    closed(1, 0, 0, 1, 4, 0, 16),
    closed(1, 1, 0, 1, 12, 0, 36),
    closed(1, 2, 0, 1, 24, 0, 64),
    closed(1, 3, 0, 1, 40, 0, 100),
    closed(2, 0, 0, 3, 3, -1, 36),
    closed(2, 0, 1, 3, 3, 1, 36),
    closed(2, 1, 0, 4, 5, -1, 64),
    closed(2, 1, 1, 4, 5, 1, 64),
    closed(2, 2, 0, 5, 7, -1, 100),
    closed(2, 2, 1, 5, 7, 1, 100),
    closed(2, 3, 0, 1, 36, 0, 144),
    closed(2, 3, 1, 1, 72, 0, 144),
    printed(0, "3.74329"),
    printed(1, "13.2216"),
    printed(2, "31.0351"),
];

/// Parameter of an [`EnergyRow`] as `(value, imaginary)`.
pub fn split_parameter(text: &str) -> (&str, bool) {
    match text.strip_suffix('i') {
        Some(v) => (v, true),
        None => (text, false),
    }
}

/// Unit in the last printed place of a decimal string.
pub fn last_place(text: &str) -> Result<Float> {
    let ctx = PrecisionContext::new(60)?;
    let decimals = text.split_once('.').map_or(0, |(_, frac)| frac.len()) as i32;
    Ok(ctx.pow10(-decimals))
}

/// `|computed − printed|` in units of the last printed place.
pub fn deviation_in_last_place(computed: &Float, printed: &str) -> Result<Float> {
    let prec = computed.prec().max(200);
    let ctx = PrecisionContext::new(prec / 3)?;
    let reference = ctx.parse(printed)?;
    let diff = Float::with_val(prec, computed - &reference).abs();
    Ok(diff / last_place(printed)?)
}
