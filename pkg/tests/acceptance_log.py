"""Pass/fail lines collected by the acceptance tests, printed in the terminal summary."""

LINES = []
