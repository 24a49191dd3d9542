"""Numerical-limit residue estimator shared by tests (independent of the analytic residues)."""

from genfresnel import closed_form


def fitted_residue(p, j, sign="plus", h=1e-3):
    """Residue of ``closed_form(p, ., sign)`` at ``q = -p*j`` from symmetric samples.

    ``R(h) = h/2 (f(q0+h) - f(q0-h)) / 1`` cancels the regular part to O(h**2);
    one Richardson step removes the h**2 term.
    """
    q0 = -p * j

    def r(step):
        return 0.5 * step * (closed_form(p, q0 + step, sign) - closed_form(p, q0 - step, sign))

    return (4.0 * r(h / 2) - r(h)) / 3.0
