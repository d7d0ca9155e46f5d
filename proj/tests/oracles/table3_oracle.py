"""Independent re-derivation of the effective cQED parameters from the
chromophore inputs (converted Hz column). Prints every derived row so the
values can be frozen into the C++ tests."""
import math

wga, wea = 4.95e13, 4.63e13
wgb, web = 4.98e13, 4.62e13
wgc, wec = 4.92e13, 4.65e13
wl = 6.00e12
JAB, JAC = 3.00e12, 2.70e12
eAB, eAC = -0.1, 0.15
Sa, Sb, Sc, Sl = 0.005, 0.004, 0.006, 0.05

wa, wb, wc = (wga + wea) / 2, (wgb + web) / 2, (wgc + wec) / 2
xa, xb, xc = wea - wga, web - wgb, wec - wgc
ga, gb, gc = math.sqrt(Sa) * wea, math.sqrt(Sb) * web, math.sqrt(Sc) * wec
gcdl = math.sqrt(Sl) * wl
wqa = wea * Sa + wl * Sl + xa / 2 + xa * ga**2 / (4 * wa**2) - ga**2 / wa - gcdl**2 / wl**2
wqb = web * Sb + xb / 2 + xb * gb**2 / (4 * wb**2) - gb**2 / wb
wqc = wec * Sc + xc / 2 + xc * gc**2 / (4 * wc**2) - gc**2 / wc
rows = dict(
    omega_a=wa, omega_b=wb, omega_c=wc, omega_l=wl,
    chi_a=xa, chi_b=xb, chi_c=xc,
    omega_qa=wqa, omega_qb=wqb, omega_qc=wqc,
    delta_ab=wqa - wqb, delta_ac=wqa - wqc,
    g_cd_a=ga * wga / wa, g_cd_b=gb * wgb / wb, g_cd_c=gc * wgc / wc,
    g_cd_l=gcdl, g_ab=JAB, g_ac=JAC, g_abl=JAB * eAB, g_acl=JAC * eAC,
)
for k, v in rows.items():
    print(f"{k:10s} {v: .17e}  ({v:.2e})")
