# V1 check components. Each module exposes run(ctx, params) -> list[CheckOutcome].
