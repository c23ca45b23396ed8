//! Scaling-filter coefficient tables for the classical wavelet database.
//!
//! Values follow the standard published tables for each family, refined in
//! the last few digits so the orthonormality identities (unit norm, sum
//! sqrt(2), double-shift orthogonality) hold to machine precision under the
//! `sum(h) = sqrt(2)` convention. Symlets of order 2 and 3 coincide with the
//! Daubechies filters of the same order, as in every standard table.

#![allow(clippy::excessive_precision)]

use super::WaveletFamily;

pub(super) const HAAR1: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

pub(super) const DB2: [f64; 4] = [
    4.82962913144533990e-01, 8.36516303737808053e-01,
    2.24143868042013000e-01, -1.29409522551260009e-01,
];

pub(super) const DB3: [f64; 6] = [
    3.32670552949342113e-01, 8.06891509311736588e-01,
    4.59877502118107517e-01, -1.35011020010055299e-01,
    -8.54412738813665612e-02, 3.52262918853309404e-02,
];

pub(super) const DB4: [f64; 8] = [
    2.30377813309114693e-01, 7.14846570552561844e-01,
    6.30880767930563691e-01, -2.79837694183420298e-02,
    -1.87034811717634725e-01, 3.08413818347900680e-02,
    3.28830116672406830e-02, -1.05974017851990614e-02,
];

pub(super) const DB5: [f64; 10] = [
    1.60102397973416910e-01, 6.03829269798253132e-01,
    7.24308528436825916e-01, 1.38428145902238120e-01,
    -2.42294887066858061e-01, -3.22448695841378238e-02,
    7.75714938392773473e-02, -6.24149021190222118e-03,
    -1.25807519996103019e-02, 3.33572528559152861e-03,
];

pub(super) const DB6: [f64; 12] = [
    1.11540743349754043e-01, 4.94623890398717847e-01,
    7.51133908020911734e-01, 3.15250351709457366e-01,
    -2.26264693965535002e-01, -1.29766867566955407e-01,
    9.75016055870131099e-02, 2.75228655305059418e-02,
    -3.15820393177619410e-02, 5.53842201534694126e-04,
    4.77725751070242136e-03, -1.07730108524963690e-03,
];

pub(super) const DB7: [f64; 14] = [
    7.78520540834998498e-02, 3.96539319484343400e-01,
    7.29132090844034630e-01, 4.69782287407150889e-01,
    -1.43906003930554860e-01, -2.24036184991692311e-01,
    7.13092192649990853e-02, 8.06126091531096933e-02,
    -3.80299369366441445e-02, -1.65745416291832905e-02,
    1.25509985536613328e-02, 4.29577975462832793e-04,
    -1.80164070530436566e-03, 3.53713800212170581e-04,
];

pub(super) const DB8: [f64; 16] = [
    5.44158422431363920e-02, 3.12871590914250985e-01,
    6.75630736296800705e-01, 5.85354683654604302e-01,
    -1.58291052558852986e-02, -2.84015542961957412e-01,
    4.72484573938528551e-04, 1.28747426620499233e-01,
    -1.73693010017988564e-02, -4.40882539307927632e-02,
    1.39810279173959891e-02, 8.74609404739094994e-03,
    -4.87035299340633429e-03, -3.91740373426896786e-04,
    6.75449406474474363e-04, -1.17476784129002938e-04,
];

pub(super) const DB9: [f64; 18] = [
    3.80779473628681184e-02, 2.43834674612980418e-01,
    6.04823123690518272e-01, 6.57288078050997426e-01,
    1.33197385825143511e-01, -2.93273783279561828e-01,
    -9.68407832215358033e-02, 1.48540749337953276e-01,
    3.07256814782022845e-02, -6.76328290607667443e-02,
    2.50947115028144407e-04, 2.23616621236951418e-02,
    -4.72320475821627096e-03, -4.28150368194211550e-03,
    1.84764688272738521e-03, 2.30385763663464819e-04,
    -2.51963188980638443e-04, 3.93473203211002596e-05,
];

pub(super) const DB10: [f64; 20] = [
    2.66700579009818174e-02, 1.88176800077425266e-01,
    5.27201188931727405e-01, 6.88459039453544253e-01,
    2.81172343660722857e-01, -2.49846424327384520e-01,
    -1.95946274377615193e-01, 1.27369340335761388e-01,
    9.30573646035594698e-02, -7.13941471661252020e-02,
    -2.94575368220051509e-02, 3.32126740591543040e-02,
    3.60655356715072848e-03, -1.07331754833078549e-02,
    1.39535174687327674e-03, 1.99240529540815501e-03,
    -6.85856695149135074e-04, -1.16466855022845568e-04,
    9.35886702858988463e-05, -1.32642028898189019e-05,
];

pub(super) const SYM4: [f64; 8] = [
    3.22231006038088616e-02, -1.26039672620335587e-02,
    -9.92195435770022449e-02, 2.97857795605542208e-01,
    8.03738751805416540e-01, 4.97618667632214073e-01,
    -2.96355276459828315e-02, -7.57657147888682742e-02,
];

pub(super) const SYM5: [f64; 10] = [
    1.95388827354967265e-02, -2.11018340253002964e-02,
    -1.75328089908032558e-01, 1.66021057640207553e-02,
    6.33978963458715405e-01, 7.23407690402046888e-01,
    1.99397533977759028e-01, -3.91342493028594904e-02,
    2.95194909262202036e-02, 2.73330683450283447e-02,
];

pub(super) const SYM6: [f64; 12] = [
    -7.80070832498018594e-03, 1.76771186420218327e-03,
    4.47249017704700394e-02, -2.10602925122393078e-02,
    -7.26375227862682132e-02, 3.37929421727691859e-01,
    7.87641141029790104e-01, 4.91055941926678174e-01,
    -4.83117425854346499e-02, -1.17990111147989712e-01,
    3.49071208414073299e-03, 1.54041093270341385e-02,
];

pub(super) const SYM7: [f64; 14] = [
    1.02681767084519086e-02, 4.01024487177560791e-03,
    -1.07808237703893847e-01, -1.40047240443217452e-01,
    2.88629631751413485e-01, 7.67764317003539865e-01,
    5.36101917091804436e-01, 1.74412550866072380e-02,
    -4.95528349373098170e-02, 6.78926935016244126e-02,
    3.05155131660342568e-02, -1.26363034032793593e-02,
    -1.04738488876713275e-03, 2.68181456831118178e-03,
];

pub(super) const SYM8: [f64; 16] = [
    1.88995033272008764e-03, -3.02920514703563007e-04,
    -1.49522583370617027e-02, 3.80875201384146128e-03,
    4.91371796734989680e-02, -2.72190299170646556e-02,
    -5.19458381076976367e-02, 3.64441894835414948e-01,
    7.77185751700504079e-01, 4.81359651258435217e-01,
    -6.12733590676407397e-02, -1.43294238350786390e-01,
    7.60748732485832906e-03, 3.16950878114857365e-02,
    -5.42132331766807243e-04, -3.38241595094224395e-03,
];

pub(super) const SYM9: [f64; 18] = [
    1.06949003290849188e-03, -4.73154498680047712e-04,
    -1.02640640276332219e-02, 8.85926749340052062e-03,
    6.20777893028855166e-02, -1.82337707793963320e-02,
    -1.91550831297284591e-01, 3.52724880352724493e-02,
    6.17338449140935497e-01, 7.17897082764411665e-01,
    2.38760914607303476e-01, -5.45689584308334738e-02,
    5.83462746125662859e-04, 3.02248788582752913e-02,
    -1.15282102076790759e-02, -1.32719677818171101e-02,
    6.19780888985563120e-04, 1.40091552591463473e-03,
];

pub(super) const SYM10: [f64; 20] = [
    -4.59329418479982295e-04, 5.70360829016470957e-05,
    4.59317359311489821e-03, -8.04358933083390202e-04,
    -2.03549398076825344e-02, 5.76491203488931764e-03,
    4.99949720831978986e-02, -3.19900568850437633e-02,
    -3.55367404684128058e-02, 3.83826761061666633e-01,
    7.69510037026507887e-01, 4.71690666933024527e-01,
    -7.08805357794843605e-02, -1.59494278890099206e-01,
    1.16098939031499121e-02, 4.59272392255061987e-02,
    -1.46538258136130447e-03, -8.64129928187340295e-03,
    9.56326695490592572e-05, 7.70159805107889939e-04,
];

pub(super) const COIF1: [f64; 6] = [
    -1.56557263336659161e-02, -7.27327860858204278e-02,
    3.84864839747624810e-01, 8.52572032034753846e-01,
    3.37897643496189781e-01, -7.27324404859871904e-02,
];

pub(super) const COIF2: [f64; 12] = [
    -7.20549448576330502e-04, -1.82320887703209104e-03,
    5.61143482394314309e-03, 2.36801719740800144e-02,
    -5.94344187199781354e-02, -7.64885990108377517e-02,
    4.17005184359329983e-01, 8.12723635513662668e-01,
    3.86110066760354587e-01, -6.73725546515879375e-02,
    -4.14649368547952146e-02, 1.63873365045321892e-02,
];

pub(super) const COIF3: [f64; 18] = [
    -3.45997732024286159e-05, -7.09833025224634547e-05,
    4.66216959857770723e-04, 1.11751877095661589e-03,
    -2.57451768822065464e-03, -9.00797613709707588e-03,
    1.58805448635315830e-02, 3.45550275731403289e-02,
    -8.23019271068071712e-02, -7.17998216193111993e-02,
    4.28483476377634120e-01, 7.93777222625608458e-01,
    4.05176902409625617e-01, -6.11233900026819446e-02,
    -6.57719112817566065e-02, 2.34526961419542768e-02,
    7.78259642723276232e-03, -3.79351286484691389e-03,
];

pub(super) const COIF4: [f64; 24] = [
    -1.78499306678936472e-06, -3.25965160163499644e-06,
    3.12298837851277247e-05, 6.23388989425631949e-05,
    -2.59974443678864374e-04, -5.89020510206704137e-04,
    1.26656140817728823e-03, 3.75143639272465046e-03,
    -5.65828669593819965e-03, -1.52117315027158924e-02,
    2.50822618017118373e-02, 3.93344271648742930e-02,
    -9.62204420738870525e-02, -6.66274742226537764e-02,
    4.34386056451702862e-01, 7.82238930960778900e-01,
    4.15308406989812251e-01, -5.60773132776959671e-02,
    -8.12666997163021126e-02, 2.66823002078790845e-02,
    1.60689439114742073e-02, -7.34616633143321800e-03,
    -1.62949205049717043e-03, 8.92313770908984699e-04,
];

pub(super) const COIF5: [f64; 30] = [
    -9.63575526210134527e-08, -1.62900167941253881e-07,
    2.06552075703513766e-06, 3.70854208903910989e-06,
    -2.12979877823128838e-05, -4.12779749253674579e-05,
    1.40469734753859832e-04, 3.02152254334935250e-04,
    -6.37882494449598333e-04, -1.66297337994298342e-03,
    2.43333636816040529e-03, 6.76421103401159043e-03,
    -9.16424070278772790e-03, -1.97617677325309903e-02,
    3.26835600595508230e-02, 4.12892226305376434e-02,
    -1.05574222011512203e-01, -6.20359505645252871e-02,
    4.37991612764372318e-01, 7.74289617296148203e-01,
    4.21566193017143820e-01, -5.20431501498624174e-02,
    -9.19200228319914242e-02, 2.81680449718603107e-02,
    2.34081392261398791e-02, -1.01311143705363343e-02,
    -4.15936321737961617e-03, 2.17827827316892505e-03,
    3.58575240545419441e-04, -2.12101884531645433e-04,
];

pub(super) fn lookup(family: WaveletFamily, order: u32) -> Option<&'static [f64]> {
    let taps: &'static [f64] = match (family, order) {
        (WaveletFamily::Haar, 1) => &HAAR1,
        (WaveletFamily::Daubechies, 2) | (WaveletFamily::Symlet, 2) => &DB2,
        (WaveletFamily::Daubechies, 3) | (WaveletFamily::Symlet, 3) => &DB3,
        (WaveletFamily::Daubechies, 4) => &DB4,
        (WaveletFamily::Daubechies, 5) => &DB5,
        (WaveletFamily::Daubechies, 6) => &DB6,
        (WaveletFamily::Daubechies, 7) => &DB7,
        (WaveletFamily::Daubechies, 8) => &DB8,
        (WaveletFamily::Daubechies, 9) => &DB9,
        (WaveletFamily::Daubechies, 10) => &DB10,
        (WaveletFamily::Symlet, 4) => &SYM4,
        (WaveletFamily::Symlet, 5) => &SYM5,
        (WaveletFamily::Symlet, 6) => &SYM6,
        (WaveletFamily::Symlet, 7) => &SYM7,
        (WaveletFamily::Symlet, 8) => &SYM8,
        (WaveletFamily::Symlet, 9) => &SYM9,
        (WaveletFamily::Symlet, 10) => &SYM10,
        (WaveletFamily::Coiflet, 1) => &COIF1,
        (WaveletFamily::Coiflet, 2) => &COIF2,
        (WaveletFamily::Coiflet, 3) => &COIF3,
        (WaveletFamily::Coiflet, 4) => &COIF4,
        (WaveletFamily::Coiflet, 5) => &COIF5,
        _ => return None,
    };
    Some(taps)
}
