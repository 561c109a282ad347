"""Order-of-magnitude estimate of the amplification product per crystal pass.

Inside the nonlinear medium, propagation length plays the role of time, so
the product gamma*tau1 for one pass equals Gamma_c * l with Gamma_c the
classical nonlinear coupling rate per unit length,

    Gamma_c^2 = eta^3/2 * chi2^2 * omega_a * omega_b * I_p   (MKS).

Typical lab numbers give gamma*tau1 ~ 1e-3 per pass: a single pass barely
amplifies, which is why the beams must traverse the crystal many times and
why a modest exchange strength between passes is enough to stabilize.
"""

from zenofloquet.cli import coupling_rate
from zenofloquet.floquet import DriveSchedule, classify_schedule


def main():
    inputs = dict(eta=220.0, chi2=2e-23, omega_a=3e15, omega_b=3e15,
                  pump_intensity=1e5)
    gamma_c = coupling_rate(**inputs)
    length = 1e-2
    product = gamma_c * length
    print("reference inputs: eta = 220 ohm, chi2 = 2e-23 C/V^2, "
          "omega_a = omega_b = 3e15 /s, I_p = 1e5 W/m^2")
    print(f"Gamma_c = {gamma_c:.4e} /m")
    print(f"gamma*tau1 per {length*100:.0f} cm pass = {product:.4e}")
    print(f"doubling the pump intensity scales Gamma_c by sqrt(2): "
          f"{coupling_rate(**{**inputs, 'pump_intensity': 2e5}) / gamma_c:.6f}")

    # at this product, even a tiny exchange strength stabilizes
    for w in (0.0, product / 2, product * 2):
        verdict = classify_schedule(
            DriveSchedule.from_products(product, w, periods=1))
        print(f"  omega*tau2 = {w:.1e}: {verdict.classification.value}")


if __name__ == "__main__":
    main()
