from hypothesis import settings

# single shared core: generous deadlines, modest example counts
settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")
