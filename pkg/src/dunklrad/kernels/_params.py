"""Region boundaries shared by both kernel backends."""

# ascending series while x^2/4 <= max(SERIES_Y, nu + 1): bounded cancellation
SERIES_Y = 4.0
# Hankel expansion (orders in [-1/2, 3/2)) plus upward recurrence beyond this
ASYMPTOTIC_X = 25.0
# Miller start order: max(nu, x) + MILLER_EXTRA + MILLER_SQRT * sqrt(max(nu, x))
MILLER_EXTRA = 30.0
MILLER_SQRT = 3.0
RESCALE = 1e250
