"""Independent reference values for the PPT cone programs, solved with cvxpy.

Used once to freeze expected values into the Rust test suites; not part of the build.
"""
import itertools
import numpy as np
import cvxpy as cp


def ghz(m):
    v = np.zeros(2**m, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return v


def w(m):
    v = np.zeros(2**m, dtype=complex)
    for k in range(m):
        v[1 << k] = 1 / np.sqrt(m)
    return v


def max_ent(d):
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1 / np.sqrt(d)
    return v


def proj(v):
    return np.outer(v, v.conj())


def cuts(m):
    # nonempty subsets A not containing the last party: one per cut up to complement
    res = []
    for r in range(1, m):
        for a in itertools.combinations(range(m), r):
            if (m - 1) in a:
                continue
            res.append(list(a))
    return res


def pt(X, dims, sys):
    return cp.partial_transpose(X, dims, sys[0]) if len(sys) == 1 else _pt_multi(X, dims, sys)


def _pt_multi(X, dims, sys):
    Y = X
    for s in sys:
        Y = cp.partial_transpose(Y, dims, s)
    return Y


def lam_ppt(rho, dims):
    D = rho.shape[0]
    W = cp.Variable((D, D), hermitian=True)
    cons = [W >> 0, cp.real(cp.trace(W)) == 1]
    for a in cuts(len(dims)):
        T = pt(W, dims, a)
        cons.append((T + T.H) / 2 >> 0)
    p = cp.Problem(cp.Maximize(cp.real(cp.trace(rho @ W))), cons)
    p.solve(solver=cp.CLARABEL)
    return p.value


def rg_ppt(rho, dims):
    D = rho.shape[0]
    Y = cp.Variable((D, D), hermitian=True)
    cons = [Y >> 0]
    for a in cuts(len(dims)):
        T = pt(rho + Y, dims, a)
        cons.append((T + T.H) / 2 >> 0)
    p = cp.Problem(cp.Minimize(cp.real(cp.trace(Y))), cons)
    p.solve(solver=cp.CLARABEL)
    return p.value


def d_ppt(rho, dims):
    D = rho.shape[0]
    M = cp.Variable((D, D), hermitian=True)
    cons = [M >> 0, np.eye(D) - M >> 0, cp.real(cp.trace(rho @ M)) == 1]
    for a in cuts(len(dims)):
        T = pt(M, dims, a)
        cons.append((T + T.H) / 2 >> 0)
    p = cp.Problem(cp.Minimize(cp.real(cp.trace(M))), cons)
    p.solve(solver=cp.CLARABEL)
    return p.value


if __name__ == "__main__":
    bell = proj(max_ent(2))
    print("bell   lam", lam_ppt(bell, [2, 2]), "rg", rg_ppt(bell, [2, 2]), "d", d_ppt(bell, [2, 2]))
    me3 = proj(max_ent(3))
    print("me3    lam", lam_ppt(me3, [3, 3]), "rg", rg_ppt(me3, [3, 3]), "d", d_ppt(me3, [3, 3]))
    for m in (2, 3, 4):
        r = proj(ghz(m))
        print(f"ghz{m}   lam", lam_ppt(r, [2] * m), "rg", rg_ppt(r, [2] * m) if m < 4 else "-",
              "d", d_ppt(r, [2] * m) if m < 4 else "-")
    for m in (3, 4):
        r = proj(w(m))
        print(f"w{m}     lam", lam_ppt(r, [2] * m), "target", ((m - 1) / m) ** (m - 1),
              "rg", rg_ppt(r, [2] * m) if m < 4 else "-", "d", d_ppt(r, [2] * m) if m < 4 else "-")
