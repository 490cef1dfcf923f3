"""Mirror-descent solvers for variational inequalities with functional constraints."""
