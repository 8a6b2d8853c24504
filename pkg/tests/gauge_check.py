"""Exact-rational check of the gauge relation, shared by the unit and acceptance tests."""

from hgfrob.hgseries import companion_polynomial_matrix, formal_solution_matrix


def exact_gauge_residual(d, M, perturb=None):
    """Number of nonzero coefficients of (z-1) D(U) + Ntilde U - (z-1) U N_U."""
    S = formal_solution_matrix(d, M)
    U, nf, n = S.U, S.normal_form(), d.n
    if perturb:
        i, j, k = perturb
        U[i][j][k] += 1
    poly = companion_polynomial_matrix(d)
    bad = 0
    for i in range(n):
        for j in range(n):
            for k in range(M - 1):
                # z^k coefficient; (z - 1) X has coefficient X[k-1] - X[k]
                def zm1(x):
                    return (x[k - 1] if k else 0) - x[k]
                DU = [c * m for m, c in enumerate(U[i][j])]
                val = zm1(DU)
                for l in range(n):
                    c0, c1 = poly[i][l]
                    val += c0 * U[l][j][k] + (c1 * U[l][j][k - 1] if k else 0)
                    if nf[l][j]:
                        val -= nf[l][j] * zm1(U[i][l])
                bad += val != 0
    return bad
